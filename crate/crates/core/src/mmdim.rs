//! Desk-scale metric mean dimension estimates for the dual action on
//! `X_f = {x ∈ ((ℝ/ℤ)^{n×1})^Γ : fx = 0}`.
//!
//! Points are restricted to a window `F`; the only constraints that can be
//! checked on `F` alone are those at the interior `F′ = {s ∈ F : K⁻¹s ⊆ F}`.
//! Upper bounds come from the counting argument through `‖f‖₁` and the window
//! kernel; lower bounds from explicit ε-separated sets of such points.

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::Rref;
use crate::groupring::{window_matrix_on, RingMatrix};
use crate::groups::{FolnerSet, GroupElement};
use crate::ranks::{validate_schedule, EngineConfig};
use crate::rational::{common_denominator, to_f64, Rational};

/// Tolerance for the interior congruence of sampled points.
pub const CONGRUENCE_TOLERANCE: f64 = 1.0 / (1u64 << 40) as f64;

/// Bits of the dyadic coefficients used for random kernel combinations.
const COEFF_BITS: u32 = 24;

/// A point of `ℝ/ℤ`, stored as its representative in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(v: f64) -> Self {
        let r = v.rem_euclid(1.0);
        CirclePoint(if r >= 1.0 { 0.0 } else { r })
    }

    pub fn from_rational(r: &Rational) -> Self {
        let frac = r - Rational::from_integer(r.floor().to_integer());
        CirclePoint::new(to_f64(&frac))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `min_{z∈ℤ} |a − b − z|`.
pub fn theta(a: CirclePoint, b: CirclePoint) -> f64 {
    circle_dist(a.0, b.0)
}

/// Distance of two representatives in `[0, 1)`; symmetric in floating point.
#[inline]
fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// A point of `(ℝ/ℤ)^{n×F}`, coordinate-major (`k·|F| + position of s`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolenoidBoxPoint {
    n: usize,
    window_len: usize,
    coords: Vec<CirclePoint>,
}

impl SolenoidBoxPoint {
    pub fn new(n: usize, window_len: usize, coords: Vec<CirclePoint>) -> Result<Self> {
        if coords.len() != n * window_len {
            return Err(Error::Shape(format!("{} coordinates for n = {n}, |F| = {window_len}", coords.len())));
        }
        Ok(SolenoidBoxPoint { n, window_len, coords })
    }

    pub fn from_values(n: usize, window_len: usize, values: &[f64]) -> Result<Self> {
        Self::new(n, window_len, values.iter().map(|&v| CirclePoint::new(v)).collect())
    }

    pub fn coords(&self) -> &[CirclePoint] {
        &self.coords
    }

    /// Coordinatewise sum.
    pub fn add(&self, other: &SolenoidBoxPoint) -> Result<SolenoidBoxPoint> {
        self.same_shape(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| CirclePoint::new(a.0 + b.0)).collect();
        Ok(SolenoidBoxPoint { n: self.n, window_len: self.window_len, coords })
    }

    fn same_shape(&self, other: &SolenoidBoxPoint) -> Result<()> {
        if self.n != other.n || self.window_len != other.window_len {
            return Err(Error::Shape("points over different windows".into()));
        }
        Ok(())
    }

    /// `max_{t∈F′, j} dist((fx)_{j,t}, ℤ)`; within [`CONGRUENCE_TOLERANCE`] for points of `X_f|_F`.
    pub fn congruence_defect(&self, f: &RingMatrix, window: &FolnerSet) -> Result<f64> {
        if f.cols() != self.n || window.len() != self.window_len {
            return Err(Error::Shape("point does not match the matrix and window".into()));
        }
        let interior: HashSet<GroupElement> = interior_set(f, window).into_iter().collect();
        let w = window_matrix_on(f, window.elements(), usize::MAX)?;
        let mut worst: f64 = 0.0;
        for (r, (_, t)) in w.row_index.iter().enumerate() {
            if !interior.contains(t) {
                continue;
            }
            let v: f64 = w.matrix.row(r).iter().map(|(c, a)| a.to_f64().unwrap_or(f64::NAN) * self.coords[*c].0).sum();
            worst = worst.max(theta(CirclePoint::new(v), CirclePoint(0.0)));
        }
        Ok(worst)
    }
}

/// `ϑ^A_F(x, y) = max over coordinates of ϑ(x_{k,s}, y_{k,s})`.
pub fn theta_a_f(x: &SolenoidBoxPoint, y: &SolenoidBoxPoint) -> Result<f64> {
    x.same_shape(y)?;
    Ok(x.coords.iter().zip(&y.coords).map(|(a, b)| theta(*a, *b)).fold(0.0, f64::max))
}

/// `F′ = {s ∈ F : K⁻¹s ⊆ F}`; all of `F` when `f = 0`.
pub fn interior_set(f: &RingMatrix, window: &FolnerSet) -> Vec<GroupElement> {
    let group = f.group();
    let k_inv: Vec<GroupElement> = group.inverse_set(f.support()).into_iter().collect();
    window.elements().iter().filter(|s| k_inv.iter().all(|u| window.contains(&group.op(u, s)))).cloned().collect()
}

/// Ingredients of the counting bound on one window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UpperBoundTerms {
    /// `m|KF∖F′| + dim ker(f on F)`, the exponent of `1 + 2/ε`.
    pub free_exponent: usize,
    /// `m|F′|`, the exponent of `‖f‖₁ + 1`.
    pub interior_exponent: usize,
    pub norm1: f64,
}

impl UpperBoundTerms {
    pub fn log_bound(&self, eps: f64) -> f64 {
        self.free_exponent as f64 * (1.0 + 2.0 / eps).ln() + self.interior_exponent as f64 * (self.norm1 + 1.0).ln()
    }
}

fn require_integral(f: &RingMatrix) -> Result<()> {
    if f.is_integral() {
        Ok(())
    } else {
        Err(Error::Input("the dual action needs integer coefficients".into()))
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::Input(format!("epsilon {eps} outside (0, 1)")))
    }
}

pub fn upper_bound_terms(f: &RingMatrix, window: &FolnerSet, cfg: &EngineConfig) -> Result<UpperBoundTerms> {
    require_integral(f)?;
    let m = f.rows();
    let interior = interior_set(f, window);
    let w = window_matrix_on(f, window.elements(), cfg.max_window_elements)?;
    let kf = w.rows().checked_div(m).unwrap_or(window.len());
    let kernel = w.cols() - crate::exactla::rank_q_with(&w.matrix, &cfg.rank_options(0x3d1)).rank;
    Ok(UpperBoundTerms {
        free_exponent: m * (kf - interior.len()) + kernel,
        interior_exponent: m * interior.len(),
        norm1: to_f64(f.norm1()),
    })
}

/// `ln[(1+2/ε)^{m|KF∖F′| + dim ker} · (‖f‖₁+1)^{m|F′|}]`.
pub fn separated_upper_bound(f: &RingMatrix, window: &FolnerSet, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok(upper_bound_terms(f, window, &EngineConfig::default())?.log_bound(eps))
}

/// Exact description of the points of `(ℝ/ℤ)^{n×F}` satisfying the interior
/// congruences, used to generate samples.
struct InteriorSystem {
    n_coords: usize,
    rows: usize,
    rref: Rref,
    /// Kernel basis scaled to integers, with its common denominator.
    kernel_int: Vec<Vec<BigInt>>,
    kernel_den: BigInt,
    z_bound: i64,
}

impl InteriorSystem {
    fn new(f: &RingMatrix, window: &FolnerSet, cfg: &EngineConfig) -> Result<Self> {
        require_integral(f)?;
        let interior: HashSet<GroupElement> = interior_set(f, window).into_iter().collect();
        let w = window_matrix_on(f, window.elements(), cfg.max_window_elements)?;
        let n_coords = w.cols();
        let dense: Vec<Vec<Rational>> = w
            .row_index
            .iter()
            .enumerate()
            .filter(|(_, (_, t))| interior.contains(t))
            .map(|(r, _)| {
                let mut row = vec![Rational::zero(); n_coords];
                for (c, v) in w.matrix.row(r) {
                    row[*c] = Rational::from_integer(v.clone());
                }
                row
            })
            .collect();
        let rows = dense.len();
        let rref = Rref::new(&dense, n_coords);
        let kernel = rref.kernel_basis();
        let kernel_den = common_denominator(kernel.iter().flatten());
        let kernel_int = kernel
            .iter()
            .map(|v| v.iter().map(|x| (x * Rational::from_integer(kernel_den.clone())).to_integer()).collect())
            .collect();
        let z_bound = (to_f64(f.norm1()) / 2.0).floor() as i64;
        Ok(InteriorSystem { n_coords, rows, rref, kernel_int, kernel_den, z_bound })
    }

    fn kernel_dim(&self) -> usize {
        self.kernel_int.len()
    }

    /// Random kernel combination `Σ c_i b_i mod 1` with dyadic `c_i` covering a full period.
    fn kernel_sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        if self.kernel_int.is_empty() {
            return vec![0.0; self.n_coords];
        }
        // Each `kernel_den·b_i` is integral, so `c ↦ c·b_i mod 1` has period `kernel_den`.
        let scale = BigInt::one() << COEFF_BITS;
        let modulus = &scale * &self.kernel_den;
        let coeffs: Vec<BigInt> = self.kernel_int.iter().map(|_| random_below(rng, &modulus)).collect();
        (0..self.n_coords)
            .map(|c| {
                let num: BigInt = self.kernel_int.iter().zip(&coeffs).map(|(b, k)| &b[c] * k).sum();
                let r = num.mod_floor(&modulus);
                ratio_to_unit(&r, &modulus)
            })
            .collect()
    }

    /// A solution of `A x = z` for a random integer vector `z`, reduced mod 1.
    fn torsion_sample<R: Rng>(&self, rng: &mut R) -> Option<Vec<f64>> {
        let z: Vec<Rational> = (0..self.rows)
            .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-self.z_bound..=self.z_bound))))
            .collect();
        let x = self.rref.solve(&z)?;
        Some(x.iter().map(|v| CirclePoint::from_rational(v).value()).collect())
    }
}

fn random_below<R: Rng>(rng: &mut R, bound: &BigInt) -> BigInt {
    let bits = bound.bits() + 16;
    let mut acc = BigInt::zero();
    let mut have = 0;
    while have < bits {
        acc = (acc << 32) + BigInt::from(rng.gen::<u32>());
        have += 32;
    }
    acc.mod_floor(bound)
}

fn ratio_to_unit(num: &BigInt, den: &BigInt) -> f64 {
    CirclePoint::from_rational(&Rational::new(num.clone(), den.clone())).value()
}

/// Seeded samples of interior solutions: kernel combinations, torsion
/// solutions, and their sums, in equal parts.
fn sample_points(system: &InteriorSystem, budget: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(budget);
    let mut failures = 0;
    while out.len() < budget && failures < 4 * budget + 16 {
        let kind = out.len() % 3;
        let point = match kind {
            0 => Some(system.kernel_sample(&mut rng)),
            1 => system.torsion_sample(&mut rng),
            _ => system.torsion_sample(&mut rng).map(|t| {
                let k = system.kernel_sample(&mut rng);
                t.iter().zip(&k).map(|(a, b)| CirclePoint::new(a + b).value()).collect()
            }),
        };
        match point {
            Some(p) => out.push(p),
            None => failures += 1,
        }
    }
    out
}

/// Size of the greedy ε-separated subset (in the max-ϑ distance) of `points`,
/// taken in order.
fn greedy_pack(points: &[Vec<f64>], eps: f64) -> usize {
    let threshold = eps - CONGRUENCE_TOLERANCE;
    let mut kept: Vec<&[f64]> = Vec::new();
    'next: for p in points {
        for q in &kept {
            let far = p.iter().zip(q.iter()).any(|(a, b)| circle_dist(*a, *b) >= threshold);
            if !far {
                continue 'next;
            }
        }
        kept.push(p);
    }
    kept.len()
}

/// One (window, ε) cell of a packing computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PackingReport {
    pub l: u64,
    pub f_size: usize,
    pub epsilon: f64,
    /// `max(grid_count, greedy_count)`.
    #[serde(serialize_with = "as_decimal")]
    pub lower_count: BigUint,
    /// Size of the greedy packing of the samples.
    pub greedy_count: usize,
    /// `⌊1/ε⌋^{dim V₀}` from the lattice of kernel points of the interior system.
    #[serde(serialize_with = "as_decimal")]
    pub grid_count: BigUint,
    /// `ln(lower_count)`.
    pub lower_log: f64,
    pub upper_log: f64,
    pub samples: usize,
    pub seed: u64,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn grid_count(kernel_dim: usize, eps: f64) -> (BigUint, f64) {
    let per_axis = (1.0 / eps).floor().max(1.0) as u64;
    let count = num_traits::pow(BigUint::from(per_axis), kernel_dim);
    (count, kernel_dim as f64 * (per_axis as f64).ln())
}

/// Packings on one window for each ε, sharing one seeded sample set.
pub fn packing_reports(
    f: &RingMatrix,
    window: &FolnerSet,
    epsilons: &[f64],
    cfg: &EngineConfig,
) -> Result<Vec<PackingReport>> {
    for &e in epsilons {
        check_eps(e)?;
    }
    let system = InteriorSystem::new(f, window, cfg)?;
    let upper = upper_bound_terms(f, window, cfg)?;
    let seed = cfg.seed ^ window.index().wrapping_mul(0x6a09_e667_f3bc_c909);
    let budget = cfg.max_samples.max(1);
    let points = sample_points(&system, budget, seed);
    Ok(epsilons
        .par_iter()
        .map(|&eps| {
            let greedy = greedy_pack(&points, eps);
            let (grid, grid_log) = grid_count(system.kernel_dim(), eps);
            let greedy_big = BigUint::from(greedy);
            let (lower_count, lower_log) = if greedy_big > grid {
                let log = (greedy as f64).ln();
                (greedy_big, log)
            } else {
                (grid.clone(), grid_log)
            };
            PackingReport {
                l: window.index(),
                f_size: window.len(),
                epsilon: eps,
                lower_count,
                greedy_count: greedy,
                grid_count: grid,
                lower_log,
                upper_log: upper.log_bound(eps),
                samples: points.len(),
                seed,
            }
        })
        .collect())
}

/// Size of an explicit ε-separated set of interior solutions on `F`: the
/// larger of the kernel lattice and a greedy packing of `budget` samples.
pub fn separated_lower_count(
    f: &RingMatrix,
    window: &FolnerSet,
    eps: f64,
    budget: usize,
    seed: u64,
) -> Result<BigUint> {
    let cfg = EngineConfig { max_samples: budget.max(1), seed, ..EngineConfig::default() };
    let mut reports = packing_reports(f, window, &[eps], &cfg)?;
    Ok(reports.pop().expect("one epsilon").lower_count)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeRow {
    pub epsilon: f64,
    /// `Δ ln(lower_count) / Δ|F|` over the two largest windows.
    pub lower_slope: f64,
    /// `Δ upper_log / Δ|F|` over the two largest windows.
    pub upper_slope: f64,
}

/// Result of [`mmdim_estimate`]. The reported interval is
/// `[lower, upper]`, where `lower` is the coefficient of `ln(1/ε)` in the
/// lower slopes and `upper` that of `ln(1+2/ε)` in the upper slopes, both
/// extrapolated from the two smallest ε and clipped to `[0, n]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MmdimEstimate {
    pub reports: Vec<PackingReport>,
    pub slopes: Vec<SlopeRow>,
    pub lower: f64,
    pub upper: f64,
    /// Unclipped extrapolated coefficients.
    pub raw_lower: f64,
    pub raw_upper: f64,
    /// `[max_ε lower_slope/|ln ε|, min_ε upper_slope/|ln ε|]`, which at desk
    /// scale is dominated by the `ε`-independent entropy part of the slopes.
    pub envelope: (f64, f64),
    pub n: usize,
}

impl MmdimEstimate {
    pub fn contains(&self, v: f64) -> bool {
        self.lower - 1e-9 <= v && v <= self.upper + 1e-9
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn mmdim_estimate(f: &RingMatrix, schedule: &[u64], epsilons: &[f64], cfg: &EngineConfig) -> Result<MmdimEstimate> {
    validate_schedule(schedule)?;
    if epsilons.is_empty() {
        return Err(Error::Input("empty epsilon schedule".into()));
    }
    let mut eps: Vec<f64> = epsilons.to_vec();
    eps.sort_by(|a, b| b.partial_cmp(a).expect("finite epsilons"));
    eps.dedup();
    let group = f.group();
    let mut reports = Vec::new();
    for &l in schedule {
        let window = group.folner_set_with_budget(l, cfg.max_window_elements)?;
        reports.extend(packing_reports(f, &window, &eps, cfg)?);
    }

    let last_l = schedule[schedule.len() - 1];
    let prev_l = (schedule.len() >= 2).then(|| schedule[schedule.len() - 2]);
    let cell = |l: u64, e: f64| reports.iter().find(|r| r.l == l && r.epsilon == e).expect("computed cell");
    let slopes: Vec<SlopeRow> = eps
        .iter()
        .map(|&e| {
            let b = cell(last_l, e);
            // Windows of equal size (finite groups) give no increment; use the last window alone.
            let (dl, du, dn) = match prev_l.map(|pl| cell(pl, e)).filter(|a| a.f_size < b.f_size) {
                Some(a) => (b.lower_log - a.lower_log, b.upper_log - a.upper_log, (b.f_size - a.f_size) as f64),
                None => (b.lower_log, b.upper_log, b.f_size as f64),
            };
            SlopeRow { epsilon: e, lower_slope: dl / dn, upper_slope: du / dn }
        })
        .collect();

    let k = slopes.len();
    let (raw_lower, raw_upper) = if k >= 2 {
        let (a, b) = (&slopes[k - 1], &slopes[k - 2]);
        let lower = (a.lower_slope - b.lower_slope) / ((1.0 / a.epsilon).ln() - (1.0 / b.epsilon).ln());
        let upper = (a.upper_slope - b.upper_slope) / ((1.0 + 2.0 / a.epsilon).ln() - (1.0 + 2.0 / b.epsilon).ln());
        (lower, upper)
    } else {
        let a = &slopes[0];
        (a.lower_slope / (1.0 / a.epsilon).ln(), a.upper_slope / (1.0 + 2.0 / a.epsilon).ln())
    };
    let envelope = (
        slopes.iter().map(|s| s.lower_slope / s.epsilon.ln().abs()).fold(f64::NEG_INFINITY, f64::max),
        slopes.iter().map(|s| s.upper_slope / s.epsilon.ln().abs()).fold(f64::INFINITY, f64::min),
    );
    let n = f.cols() as f64;
    Ok(MmdimEstimate {
        reports,
        slopes,
        lower: raw_lower.clamp(0.0, n),
        upper: raw_upper.clamp(0.0, n),
        raw_lower,
        raw_upper,
        envelope,
        n: f.cols(),
    })
}

/// Greedy ε-separated packing (sup norm) of seeded samples from the unit
/// ball of `ℝ^k`, seeded with the points of the ε-grid.
pub fn greedy_ball_packing(k: usize, eps: f64, samples: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<f64>> = (0..samples).map(|_| (0..k).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect();
    let steps = (2.0 / eps).floor() as i64;
    let mut idx = vec![0i64; k];
    'grid: loop {
        points.push(idx.iter().map(|&i| -1.0 + i as f64 * eps).collect());
        for d in (0..k).rev() {
            if idx[d] < steps {
                idx[d] += 1;
                continue 'grid;
            }
            idx[d] = 0;
        }
        break;
    }
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if kept.iter().all(|q| p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) >= eps) {
            kept.push(p);
        }
    }
    kept.len()
}
