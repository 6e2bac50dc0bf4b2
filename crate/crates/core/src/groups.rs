//! Concrete amenable groups and their canonical Følner windows.
//!
//! Four families are supported: free abelian groups `ℤ^d`, finite products of
//! cyclic groups, products of such a finite group with `ℤ^d`, and the discrete
//! Heisenberg group `H₃(ℤ)`. Elements are plain integer coordinate vectors;
//! finite coordinates are always stored reduced into `[0, k)`.
//!
//! Each family comes with one fixed cofinal sequence of windows `F_1, F_2, …`.
//! Limits reported anywhere in this crate are limits along that sequence.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Default cap on the number of elements of a single window.
pub const DEFAULT_ELEMENT_BUDGET: usize = 4_000_000;

/// A group element as its coordinate vector.
///
/// The derived ordering is lexicographic on coordinates, which is the order
/// every window is listed in.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(SmallVec<[i64; 4]>);

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    fn from_raw(coords: impl IntoIterator<Item = i64>) -> Self {
        GroupElement(coords.into_iter().collect())
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// An ordered, duplicate-free set of group elements.
pub type ElementSet = BTreeSet<GroupElement>;

/// Which side a translating element multiplies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `{g·s : s ∈ S}`
    Left,
    /// `{s·g : s ∈ S}`
    Right,
}

/// A concrete amenable group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub enum GroupSpec {
    Zd { d: usize },
    FiniteCyclicProduct { orders: Vec<u64> },
    FiniteTimesZd { orders: Vec<u64>, d: usize },
    Heisenberg,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
enum GroupSpecRepr {
    Zd { d: usize },
    FiniteCyclicProduct { orders: Vec<u64> },
    FiniteTimesZd { orders: Vec<u64>, d: usize },
    Heisenberg,
}

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = Error;

    fn try_from(repr: GroupSpecRepr) -> Result<Self> {
        match repr {
            GroupSpecRepr::Zd { d } => Ok(GroupSpec::Zd { d }),
            GroupSpecRepr::FiniteCyclicProduct { orders } => GroupSpec::finite(orders),
            GroupSpecRepr::FiniteTimesZd { orders, d } => GroupSpec::finite_times_zd(orders, d),
            GroupSpecRepr::Heisenberg => Ok(GroupSpec::Heisenberg),
        }
    }
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(spec: GroupSpec) -> Self {
        match spec {
            GroupSpec::Zd { d } => GroupSpecRepr::Zd { d },
            GroupSpec::FiniteCyclicProduct { orders } => GroupSpecRepr::FiniteCyclicProduct { orders },
            GroupSpec::FiniteTimesZd { orders, d } => GroupSpecRepr::FiniteTimesZd { orders, d },
            GroupSpec::Heisenberg => GroupSpecRepr::Heisenberg,
        }
    }
}

fn check_orders(orders: &[u64]) -> Result<()> {
    if let Some(k) = orders.iter().find(|&&k| k == 0 || k > i64::MAX as u64) {
        return Err(Error::Input(format!("cyclic order {k} out of range")));
    }
    Ok(())
}

impl GroupSpec {
    pub fn zd(d: usize) -> Self {
        GroupSpec::Zd { d }
    }

    pub fn finite(orders: Vec<u64>) -> Result<Self> {
        check_orders(&orders)?;
        Ok(GroupSpec::FiniteCyclicProduct { orders })
    }

    pub fn finite_times_zd(orders: Vec<u64>, d: usize) -> Result<Self> {
        check_orders(&orders)?;
        Ok(GroupSpec::FiniteTimesZd { orders, d })
    }

    /// Orders of the leading finite coordinates (empty for torsion-free families).
    pub fn finite_orders(&self) -> &[u64] {
        match self {
            GroupSpec::FiniteCyclicProduct { orders } | GroupSpec::FiniteTimesZd { orders, .. } => orders,
            _ => &[],
        }
    }

    /// Number of free (unbounded) coordinates.
    pub fn free_rank(&self) -> usize {
        match self {
            GroupSpec::Zd { d } | GroupSpec::FiniteTimesZd { d, .. } => *d,
            GroupSpec::FiniteCyclicProduct { .. } => 0,
            GroupSpec::Heisenberg => 3,
        }
    }

    pub fn coord_len(&self) -> usize {
        self.finite_orders().len() + self.free_rank()
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self, GroupSpec::Heisenberg)
    }

    /// Group order, or `None` for infinite groups.
    pub fn order(&self) -> Option<u64> {
        if self.free_rank() > 0 {
            return None;
        }
        self.finite_orders().iter().try_fold(1u64, |acc, &k| acc.checked_mul(k))
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// The lcm of the orders of all finite subgroups.
    ///
    /// For every implemented family the finite part is itself the largest
    /// finite subgroup, so this is the order of the finite part.
    pub fn finite_subgroup_lcm(&self) -> u64 {
        match self {
            GroupSpec::Zd { .. } | GroupSpec::Heisenberg => 1,
            GroupSpec::FiniteCyclicProduct { orders } | GroupSpec::FiniteTimesZd { orders, .. } => {
                orders.iter().product()
            }
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::from_raw(std::iter::repeat_n(0, self.coord_len()))
    }

    /// Builds an element, reducing finite coordinates into range.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.coord_len() {
            return Err(Error::GroupMismatch(format!(
                "element {:?} has {} coordinates, {:?} needs {}",
                coords,
                coords.len(),
                self,
                self.coord_len()
            )));
        }
        let orders = self.finite_orders();
        Ok(GroupElement::from_raw(coords.iter().enumerate().map(|(i, &c)| {
            if i < orders.len() {
                c.rem_euclid(orders[i] as i64)
            } else {
                c
            }
        })))
    }

    /// Whether `g` is a correctly shaped, reduced element of this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        let orders = self.finite_orders();
        g.0.len() == self.coord_len() && orders.iter().zip(g.0.iter()).all(|(&k, &c)| c >= 0 && (c as u64) < k)
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!("{g:?} is not an element of {self:?}")))
        }
    }

    /// Group product `g·h`.
    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.op(g, h))
    }

    /// Group product without validation; both operands must belong to `self`.
    pub(crate) fn op(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match self {
            GroupSpec::Heisenberg => {
                let (a, b, c) = (g.0[0], g.0[1], g.0[2]);
                let (a2, b2, c2) = (h.0[0], h.0[1], h.0[2]);
                GroupElement::from_raw([a + a2, b + b2, c + c2 + a * b2])
            }
            _ => {
                let orders = self.finite_orders();
                GroupElement::from_raw(g.0.iter().zip(h.0.iter()).enumerate().map(|(i, (&x, &y))| {
                    if i < orders.len() {
                        (x + y).rem_euclid(orders[i] as i64)
                    } else {
                        x + y
                    }
                }))
            }
        }
    }

    /// Group inverse.
    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        match self {
            // (a,b,c)·(−a,−b,ab−c) = (0,0,c + ab − c − ab)
            GroupSpec::Heisenberg => {
                let (a, b, c) = (g.0[0], g.0[1], g.0[2]);
                GroupElement::from_raw([-a, -b, a * b - c])
            }
            _ => {
                let orders = self.finite_orders();
                GroupElement::from_raw(g.0.iter().enumerate().map(|(i, &x)| {
                    if i < orders.len() {
                        (-x).rem_euclid(orders[i] as i64)
                    } else {
                        -x
                    }
                }))
            }
        }
    }

    /// Per-coordinate inclusive ranges of the canonical window of index `l`.
    fn window_ranges(&self, l: u64) -> Vec<(i64, i64)> {
        let l = l as i64;
        match self {
            GroupSpec::Heisenberg => vec![(-l, l), (-l, l), (-l * l, l * l)],
            _ => {
                let mut ranges: Vec<(i64, i64)> = self.finite_orders().iter().map(|&k| (0, k as i64 - 1)).collect();
                ranges.extend(std::iter::repeat_n((0, l - 1), self.free_rank()));
                ranges
            }
        }
    }

    /// Number of elements of the canonical window of index `l`.
    pub fn folner_size(&self, l: u64) -> Option<u128> {
        self.window_ranges(l).iter().try_fold(1u128, |acc, &(lo, hi)| acc.checked_mul((hi - lo + 1) as u128))
    }

    /// The canonical window `F_l`, with the default element budget.
    pub fn folner_set(&self, l: u64) -> Result<FolnerSet> {
        self.folner_set_with_budget(l, DEFAULT_ELEMENT_BUDGET)
    }

    /// The canonical window `F_l`, listed lexicographically.
    ///
    /// `ℤ^d`: the box `[0,l)^d`. Finite groups: the whole group for every `l`.
    /// Finite×`ℤ^d`: finite part × `[0,l)^d`. Heisenberg: `|a|,|b| ≤ l, |c| ≤ l²`.
    pub fn folner_set_with_budget(&self, l: u64, budget: usize) -> Result<FolnerSet> {
        if l == 0 {
            return Err(Error::Input("window index must be at least 1".into()));
        }
        if matches!(self, GroupSpec::Heisenberg) && l > (1 << 20) {
            return Err(Error::Budget { needed: u128::MAX, budget: budget as u128 });
        }
        let needed = self.folner_size(l).unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(Error::Budget { needed, budget: budget as u128 });
        }
        let elements = box_elements(&self.window_ranges(l));
        Ok(FolnerSet::from_sorted(l, elements))
    }

    /// The unit box used to grow windows by one layer: `{-1,0,1}` on free
    /// coordinates and every residue on finite ones.
    pub fn unit_box(&self) -> Vec<GroupElement> {
        let ranges: Vec<(i64, i64)> = match self {
            GroupSpec::Heisenberg => vec![(-1, 1); 3],
            _ => {
                let mut r: Vec<(i64, i64)> = self.finite_orders().iter().map(|&k| (0, k as i64 - 1)).collect();
                r.extend(std::iter::repeat_n((-1, 1), self.free_rank()));
                r
            }
        };
        box_elements(&ranges)
    }

    /// Product set `{a·b : a ∈ left, b ∈ right}`.
    pub fn product_set<'a, 'b>(
        &self,
        left: impl IntoIterator<Item = &'a GroupElement>,
        right: impl IntoIterator<Item = &'b GroupElement> + Clone,
    ) -> ElementSet {
        let mut out = ElementSet::new();
        for a in left {
            for b in right.clone() {
                out.insert(self.op(a, b));
            }
        }
        out
    }

    /// Pointwise inverse `S⁻¹`.
    pub fn inverse_set<'a>(&self, set: impl IntoIterator<Item = &'a GroupElement>) -> ElementSet {
        set.into_iter().map(|g| self.inverse(g)).collect()
    }

    /// `{g·s}` (left) or `{s·g}` (right) for `s` in the set.
    pub fn translate_set<'a>(
        &self,
        set: impl IntoIterator<Item = &'a GroupElement>,
        g: &GroupElement,
        side: Side,
    ) -> ElementSet {
        set.into_iter()
            .map(|s| match side {
                Side::Left => self.op(g, s),
                Side::Right => self.op(s, g),
            })
            .collect()
    }

    /// Exact `|KF∖F| / |F|`.
    pub fn boundary_ratio(&self, window: &FolnerSet, k: &ElementSet) -> BigRational {
        let kf = self.product_set(k, window.elements());
        let outside = kf.iter().filter(|t| !window.contains(t)).count();
        BigRational::new(BigInt::from(outside), BigInt::from(window.len()))
    }
}

/// All points of an integer box, in lexicographic order.
fn box_elements(ranges: &[(i64, i64)]) -> Vec<GroupElement> {
    let mut out = Vec::new();
    if ranges.iter().any(|&(lo, hi)| hi < lo) {
        return out;
    }
    let mut cur: Vec<i64> = ranges.iter().map(|&(lo, _)| lo).collect();
    loop {
        out.push(GroupElement::from_raw(cur.iter().copied()));
        // odometer, last coordinate fastest
        let mut i = ranges.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = ranges[i].0;
        }
    }
}

/// A finite window of a group together with a reverse index.
#[derive(Clone, Debug)]
pub struct FolnerSet {
    index: u64,
    elements: Vec<GroupElement>,
    positions: HashMap<GroupElement, usize>,
}

impl FolnerSet {
    fn from_sorted(index: u64, elements: Vec<GroupElement>) -> Self {
        let positions = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        FolnerSet { index, elements, positions }
    }

    /// An arbitrary finite set, listed lexicographically. The index is informational.
    pub fn from_set(index: u64, set: ElementSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::Input("window must be nonempty".into()));
        }
        Ok(Self::from_sorted(index, set.into_iter().collect()))
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.positions.contains_key(g)
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.positions.get(g).copied()
    }

    pub fn to_set(&self) -> ElementSet {
        self.elements.iter().cloned().collect()
    }
}
