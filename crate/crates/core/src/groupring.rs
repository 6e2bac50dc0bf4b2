//! Group rings `ℤΓ ⊂ ℚΓ`: elements, matrices, the involution, and the
//! restriction of a matrix operator to a finite window.
//!
//! A matrix `f ∈ M_{m,n}(ℚΓ)` acts on column vectors `x ∈ (ℚΓ)^{n×1}` by
//! `(fx)_j = Σ_k f_{jk} x_k`, with the convolution `(ab)_t = Σ_u a_u b_{u⁻¹t}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::SparseIntMatrix;
use crate::groups::{ElementSet, FolnerSet, GroupElement, GroupSpec, DEFAULT_ELEMENT_BUDGET};
use crate::rational::{format_coeff, parse_rational, Rational};

/// A finitely supported function `Γ → ℚ`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElem {
    group: GroupSpec,
    terms: BTreeMap<GroupElement, Rational>,
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(g, c)| format!("{}·{:?}", format_coeff(c), g)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_same(a: &GroupSpec, b: &GroupSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroupMismatch(format!("{a:?} vs {b:?}")))
    }
}

impl RingElem {
    pub fn zero(group: &GroupSpec) -> Self {
        RingElem { group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn one(group: &GroupSpec) -> Self {
        Self::monomial(group, group.identity(), Rational::one())
    }

    /// `c·e`
    pub fn constant(group: &GroupSpec, c: Rational) -> Self {
        Self::monomial(group, group.identity(), c)
    }

    pub fn monomial(group: &GroupSpec, g: GroupElement, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(g, c);
        }
        RingElem { group: group.clone(), terms }
    }

    /// Sums the given terms; every element must belong to `group`.
    pub fn from_terms(group: &GroupSpec, terms: impl IntoIterator<Item = (GroupElement, Rational)>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (g, c) in terms {
            if !group.contains(&g) {
                return Err(Error::GroupMismatch(format!("{g:?} is not an element of {group:?}")));
            }
            accumulate(&mut out, g, c);
        }
        out.retain(|_, c| !c.is_zero());
        Ok(RingElem { group: group.clone(), terms: out })
    }

    /// Convenience constructor from integer coefficients and raw coordinates.
    pub fn from_ints(group: &GroupSpec, terms: &[(i64, &[i64])]) -> Result<Self> {
        let mut parsed = Vec::with_capacity(terms.len());
        for &(c, coords) in terms {
            parsed.push((group.element(coords)?, Rational::from_integer(BigInt::from(c))));
        }
        Self::from_terms(group, parsed)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn terms(&self) -> &BTreeMap<GroupElement, Rational> {
        &self.terms
    }

    pub fn coeff(&self, g: &GroupElement) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn support(&self) -> ElementSet {
        self.terms.keys().cloned().collect()
    }

    /// `Σ |f_s|`
    pub fn norm1(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn try_add(&self, other: &RingElem) -> Result<RingElem> {
        check_same(&self.group, &other.group)?;
        let mut terms = self.terms.clone();
        for (g, c) in &other.terms {
            accumulate(&mut terms, g.clone(), c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(RingElem { group: self.group.clone(), terms })
    }

    pub fn try_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.try_add(&other.neg())
    }

    /// Convolution product.
    pub fn try_mul(&self, other: &RingElem) -> Result<RingElem> {
        check_same(&self.group, &other.group)?;
        let mut terms = BTreeMap::new();
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                accumulate(&mut terms, self.group.op(g, h), a * b);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(RingElem { group: self.group.clone(), terms })
    }

    pub fn neg(&self) -> RingElem {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, by: &Rational) -> RingElem {
        if by.is_zero() {
            return RingElem::zero(&self.group);
        }
        RingElem { group: self.group.clone(), terms: self.terms.iter().map(|(g, c)| (g.clone(), c * by)).collect() }
    }

    /// Coefficient reflection `s ↦ s⁻¹`.
    pub fn star(&self) -> RingElem {
        RingElem {
            group: self.group.clone(),
            terms: self.terms.iter().map(|(g, c)| (self.group.inverse(g), c.clone())).collect(),
        }
    }
}

fn accumulate(terms: &mut BTreeMap<GroupElement, Rational>, g: GroupElement, c: Rational) {
    *terms.entry(g).or_insert_with(Rational::zero) += c;
}

pub fn ring_add(a: &RingElem, b: &RingElem) -> Result<RingElem> {
    a.try_add(b)
}

pub fn ring_mul(a: &RingElem, b: &RingElem) -> Result<RingElem> {
    a.try_mul(b)
}

/// An `m×n` matrix over `ℚΓ`, with its support and `ℓ¹` norm cached.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RingMatrixRepr", into = "RingMatrixRepr")]
pub struct RingMatrix {
    group: GroupSpec,
    rows: usize,
    cols: usize,
    entries: Vec<RingElem>,
    support: ElementSet,
    norm1: Rational,
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingMatrix[{}x{}]", self.rows, self.cols)?;
        f.debug_list().entries(self.entries.chunks(self.cols.max(1))).finish()
    }
}

impl RingMatrix {
    /// Builds from row-major entries.
    pub fn new(group: &GroupSpec, rows: usize, cols: usize, entries: Vec<RingElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        for e in &entries {
            check_same(group, &e.group)?;
        }
        let support = entries.iter().flat_map(|e| e.terms.keys().cloned()).collect();
        let norm1 = entries.iter().map(RingElem::norm1).sum();
        Ok(RingMatrix { group: group.clone(), rows, cols, entries, support, norm1 })
    }

    pub fn from_rows(group: &GroupSpec, cols: usize, rows: Vec<Vec<RingElem>>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape(format!("row of length {} in a matrix with {cols} columns", bad.len())));
        }
        let m = rows.len();
        Self::new(group, m, cols, rows.into_iter().flatten().collect())
    }

    pub fn zero(group: &GroupSpec, rows: usize, cols: usize) -> Self {
        Self::new(group, rows, cols, vec![RingElem::zero(group); rows * cols]).expect("consistent shape")
    }

    /// A 1×1 matrix.
    pub fn scalar(elem: RingElem) -> Self {
        let group = elem.group.clone();
        Self::new(&group, 1, 1, vec![elem]).expect("consistent shape")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, j: usize, k: usize) -> &RingElem {
        &self.entries[j * self.cols + k]
    }

    pub fn row(&self, j: usize) -> &[RingElem] {
        &self.entries[j * self.cols..(j + 1) * self.cols]
    }

    /// Union of the supports of all entries (empty for the zero matrix).
    pub fn support(&self) -> &ElementSet {
        &self.support
    }

    /// Union of the supports of the entries in row `j`.
    pub fn row_support(&self, j: usize) -> ElementSet {
        self.row(j).iter().flat_map(|e| e.terms.keys().cloned()).collect()
    }

    /// Sum of absolute values of all coefficients.
    pub fn norm1(&self) -> &Rational {
        &self.norm1
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(RingElem::is_integral)
    }

    /// `(f*)_{k,j} = (f_{j,k})*`, an `n×m` matrix.
    pub fn involution(&self) -> RingMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for k in 0..self.cols {
            for j in 0..self.rows {
                entries.push(self.entry(j, k).star());
            }
        }
        RingMatrix::new(&self.group, self.cols, self.rows, entries).expect("consistent shape")
    }

    pub fn try_mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        check_same(&self.group, &other.group)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for j in 0..self.rows {
            for l in 0..other.cols {
                let mut acc = RingElem::zero(&self.group);
                for k in 0..self.cols {
                    acc = acc.try_add(&self.entry(j, k).try_mul(other.entry(k, l))?)?;
                }
                entries.push(acc);
            }
        }
        RingMatrix::new(&self.group, self.rows, other.cols, entries)
    }

    /// The submatrix on the given rows.
    pub fn select_rows(&self, rows: &[usize]) -> RingMatrix {
        let entries = rows.iter().flat_map(|&j| self.row(j).iter().cloned()).collect();
        RingMatrix::new(&self.group, rows.len(), self.cols, entries).expect("consistent shape")
    }

    /// Scales every row by the lcm of its denominators. Over `ℚΓ` this spans
    /// the same row module and has the same kernel.
    pub fn clear_denominators(&self) -> RingMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.rows {
            let den = crate::rational::common_denominator(self.row(j).iter().flat_map(|e| e.terms.values()));
            let by = Rational::from_integer(den);
            entries.extend(self.row(j).iter().map(|e| e.scale(&by)));
        }
        RingMatrix::new(&self.group, self.rows, self.cols, entries).expect("consistent shape")
    }

    fn require_integral(&self) -> Result<()> {
        if self.is_integral() {
            Ok(())
        } else {
            Err(Error::Input("matrix has non-integral coefficients".into()))
        }
    }

    /// Integer coefficients as `(j, k, u, f_{jku})`, row-major.
    pub(crate) fn integer_terms(&self) -> Result<Vec<(usize, usize, &GroupElement, BigInt)>> {
        self.require_integral()?;
        let mut out = Vec::new();
        for j in 0..self.rows {
            for k in 0..self.cols {
                for (u, c) in &self.entry(j, k).terms {
                    out.push((j, k, u, c.numer().clone()));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RingMatrixRepr {
    group: GroupSpec,
    rows: usize,
    cols: usize,
    entries: Vec<EntryRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRepr {
    row: usize,
    col: usize,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    coeff: String,
    elem: Vec<i64>,
}

impl TryFrom<RingMatrixRepr> for RingMatrix {
    type Error = Error;

    fn try_from(repr: RingMatrixRepr) -> Result<Self> {
        let group = repr.group;
        let mut cells: Vec<Option<RingElem>> = vec![None; repr.rows * repr.cols];
        for entry in repr.entries {
            if entry.row >= repr.rows || entry.col >= repr.cols {
                return Err(Error::Input(format!(
                    "entry ({}, {}) outside a {}x{} matrix",
                    entry.row, entry.col, repr.rows, repr.cols
                )));
            }
            let slot = &mut cells[entry.row * repr.cols + entry.col];
            if slot.is_some() {
                return Err(Error::Input(format!("duplicate entry ({}, {})", entry.row, entry.col)));
            }
            let mut terms = Vec::with_capacity(entry.terms.len());
            for t in entry.terms {
                terms.push((group.element(&t.elem)?, parse_rational(&t.coeff)?));
            }
            *slot = Some(RingElem::from_terms(&group, terms)?);
        }
        let entries = cells.into_iter().map(|c| c.unwrap_or_else(|| RingElem::zero(&group))).collect();
        RingMatrix::new(&group, repr.rows, repr.cols, entries)
    }
}

impl From<RingMatrix> for RingMatrixRepr {
    fn from(m: RingMatrix) -> Self {
        let mut entries = Vec::new();
        for j in 0..m.rows {
            for k in 0..m.cols {
                let e = m.entry(j, k);
                if e.is_zero() {
                    continue;
                }
                let terms = e
                    .terms
                    .iter()
                    .map(|(g, c)| TermRepr { coeff: format_coeff(c), elem: g.coords().to_vec() })
                    .collect();
                entries.push(EntryRepr { row: j, col: k, terms });
            }
        }
        RingMatrixRepr { group: m.group, rows: m.rows, cols: m.cols, entries }
    }
}

/// The integer matrix of `x ↦ fx` from `(ℤ[D])^{n×1}` to `(ℤ[KD])^{m×1}`.
///
/// Rows are indexed by `(j, t)` with `t ∈ KD` (`K` the support of `f`, and
/// `KD = D` when `f = 0`), columns by `(k, s)` with `s ∈ D`; both are ordered
/// coordinate-major, then lexicographically in the group element.
#[derive(Clone, Debug)]
pub struct WindowMatrix {
    pub matrix: SparseIntMatrix,
    pub row_index: Vec<(usize, GroupElement)>,
    pub col_index: Vec<(usize, GroupElement)>,
}

impl WindowMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

pub fn window_matrix(f: &RingMatrix, window: &FolnerSet) -> Result<WindowMatrix> {
    window_matrix_on(f, window.elements(), DEFAULT_ELEMENT_BUDGET)
}

/// Window matrix on an arbitrary sorted, duplicate-free domain.
pub fn window_matrix_on(f: &RingMatrix, domain: &[GroupElement], budget: usize) -> Result<WindowMatrix> {
    let terms = f.integer_terms()?;
    let group = f.group();
    let targets: Vec<GroupElement> = if f.support().is_empty() {
        domain.to_vec()
    } else {
        group.product_set(f.support(), domain).into_iter().collect()
    };
    let needed = (f.rows() as u128) * (targets.len() as u128) + (f.cols() as u128) * (domain.len() as u128);
    if needed > budget as u128 {
        return Err(Error::Budget { needed, budget: budget as u128 });
    }
    let target_pos: HashMap<&GroupElement, usize> = targets.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let (nt, nd) = (targets.len(), domain.len());
    let mut trip = Vec::with_capacity(terms.len() * nd);
    for (j, k, u, c) in &terms {
        for (si, s) in domain.iter().enumerate() {
            let t = group.op(u, s);
            trip.push((j * nt + target_pos[&t], k * nd + si, c.clone()));
        }
    }
    let matrix = SparseIntMatrix::from_triplets(f.rows() * nt, f.cols() * nd, trip)?;
    let row_index = (0..f.rows()).flat_map(|j| targets.iter().map(move |t| (j, t.clone()))).collect();
    let col_index = (0..f.cols()).flat_map(|k| domain.iter().map(move |s| (k, s.clone()))).collect();
    Ok(WindowMatrix { matrix, row_index, col_index })
}
