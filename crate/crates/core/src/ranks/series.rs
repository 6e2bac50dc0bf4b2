//! Density series along the canonical window sequence, limit estimates,
//! convergence control and snapping to the rationality grid.

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::config::EngineConfig;
use super::elek::elek_kernel_dim;
use super::erank::erank_dual_restriction_dim;
use super::presentation::{GeneratorList, ModulePresentation};
use super::span::span_rank;
use crate::error::{Error, Result};
use crate::exactla::RankCertificate;
use crate::groups::{FolnerSet, GroupSpec};
use crate::rational::{ratio, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Quotient mean rank `n − rank⟨F⁻¹A_f⟩/|F|`.
    MrankSubmodule,
    /// `dim ker(f on F)/|F|`.
    VndKernelDensity,
    /// `dim(M*|_{F⁻¹})/|F|` over ℚ.
    Erank,
    /// Raw submodule density `rank⟨F⁻¹A⟩/|F|`.
    SubmoduleDensity,
}

impl Quantity {
    pub fn tag(self) -> &'static str {
        match self {
            Quantity::MrankSubmodule => "mrank-submodule",
            Quantity::VndKernelDensity => "vnd-kernel-density",
            Quantity::Erank => "erank",
            Quantity::SubmoduleDensity => "submodule-density",
        }
    }
}

/// Which side of the limit every density of a series lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// Densities dominate the limit (inf characterization); estimate = running minimum.
    Upper,
    /// Densities are dominated by the limit; estimate = running maximum.
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesStatus {
    Converged,
    ExhaustedBudget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRecord {
    pub l: u64,
    pub f_size: usize,
    pub numerator: usize,
    pub density: Rational,
    pub certificate: Option<RankCertificate>,
    /// False when an auxiliary window computation did not stabilize.
    pub stabilized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensitySeries {
    pub quantity: Quantity,
    pub group: GroupSpec,
    pub n: usize,
    pub bound: Bound,
    pub records: Vec<SeriesRecord>,
    /// Running minimum (upper-bound series) or maximum (lower-bound series).
    pub running_bound: Vec<Rational>,
    pub limit_estimate: Option<Rational>,
    pub status: SeriesStatus,
    pub tolerance: Rational,
    /// Why the series stopped short of convergence, if it did.
    pub stop_reason: Option<String>,
}

impl DensitySeries {
    pub fn densities(&self) -> impl Iterator<Item = &Rational> {
        self.records.iter().map(|r| &r.density)
    }

    pub fn is_converged(&self) -> bool {
        self.status == SeriesStatus::Converged
    }
}

/// Schedules must be nonempty and strictly increasing.
pub fn validate_schedule(schedule: &[u64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Input("empty window schedule".into()));
    }
    if schedule[0] == 0 {
        return Err(Error::Input("window indices start at 1".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Input(format!("window schedule {schedule:?} is not strictly increasing")));
    }
    Ok(())
}

type WindowValue = (usize, Option<RankCertificate>, bool);

fn run_series(
    quantity: Quantity,
    group: &GroupSpec,
    n: usize,
    bound: Bound,
    schedule: &[u64],
    cfg: &EngineConfig,
    compute: impl Fn(&FolnerSet) -> Result<WindowValue> + Sync,
) -> Result<DensitySeries> {
    validate_schedule(schedule)?;
    let results: Vec<Result<(u64, usize, WindowValue)>> = schedule
        .par_iter()
        .map(|&l| {
            let window = group.folner_set_with_budget(l, cfg.max_window_elements)?;
            let value = compute(&window)?;
            Ok((l, window.len(), value))
        })
        .collect();

    let mut records = Vec::new();
    let mut stop_reason = None;
    for r in results {
        match r {
            Ok((l, size, (numerator, certificate, stabilized))) => records.push(SeriesRecord {
                l,
                f_size: size,
                numerator,
                density: Rational::new(BigInt::from(numerator), BigInt::from(size)),
                certificate,
                stabilized,
            }),
            Err(Error::Budget { needed, budget }) => {
                stop_reason = Some(format!(
                    "window budget exceeded after {} of {} windows ({needed} > {budget})",
                    records.len(),
                    schedule.len()
                ));
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let mut running_bound: Vec<Rational> = Vec::with_capacity(records.len());
    for r in &records {
        let next = match (running_bound.last(), bound) {
            (None, _) => r.density.clone(),
            (Some(prev), Bound::Upper) => prev.clone().min(r.density.clone()),
            (Some(prev), Bound::Lower) => prev.clone().max(r.density.clone()),
        };
        running_bound.push(next);
    }
    let limit_estimate = running_bound.last().cloned();

    let grid = group.finite_subgroup_lcm();
    let tol = &cfg.tolerance;
    let on_grid = |v: &Rational| snap_to_grid(v, grid).residual < *tol;
    let converged = stop_reason.is_none()
        && match records.as_slice() {
            [] => false,
            // Finite groups: the window is the whole group, so one exact value suffices.
            [.., last] if group.is_finite() => last.stabilized,
            [.., prev, last] => {
                (&last.density - &prev.density).abs() < *tol
                    && limit_estimate.as_ref().is_some_and(on_grid)
                    && last.stabilized
                    && prev.stabilized
            }
            [_] => false,
        };
    if !converged && stop_reason.is_none() {
        stop_reason = Some("schedule ended before the densities settled within tolerance".into());
    }
    Ok(DensitySeries {
        quantity,
        group: group.clone(),
        n,
        bound,
        records,
        running_bound,
        limit_estimate,
        status: if converged { SeriesStatus::Converged } else { SeriesStatus::ExhaustedBudget },
        tolerance: tol.clone(),
        stop_reason,
    })
}

/// Quotient mean rank via `n − rank⟨F⁻¹A_f⟩/|F|`.
pub fn mrank_of_presentation(p: &ModulePresentation, schedule: &[u64], cfg: &EngineConfig) -> Result<DensitySeries> {
    let n = p.n();
    let rows = p.relation_rows();
    run_series(Quantity::MrankSubmodule, p.group(), n, Bound::Lower, schedule, cfg, |w| {
        if p.m() == 0 {
            return Ok((n * w.len(), None, true));
        }
        let (rank, cert) = span_rank(&rows, w, cfg)?;
        Ok((n * w.len() - rank, Some(cert), true))
    })
}

/// Submodule densities `rank⟨F⁻¹A⟩/|F|` of a generator list.
pub fn submodule_series(gens: &GeneratorList, schedule: &[u64], cfg: &EngineConfig) -> Result<DensitySeries> {
    run_series(Quantity::SubmoduleDensity, gens.group(), gens.n(), Bound::Upper, schedule, cfg, |w| {
        if gens.is_empty() {
            return Ok((0, None, true));
        }
        let (rank, cert) = span_rank(gens, w, cfg)?;
        Ok((rank, Some(cert), true))
    })
}

/// Window kernel densities of `f`.
pub fn vnd_series(p: &ModulePresentation, schedule: &[u64], cfg: &EngineConfig) -> Result<DensitySeries> {
    run_series(Quantity::VndKernelDensity, p.group(), p.n(), Bound::Lower, schedule, cfg, |w| {
        let (dim, cert) = elek_kernel_dim(p, w, cfg)?;
        Ok((dim, cert, true))
    })
}

/// Dual-restriction densities over ℚ.
pub fn erank_series(p: &ModulePresentation, schedule: &[u64], cfg: &EngineConfig) -> Result<DensitySeries> {
    run_series(Quantity::Erank, p.group(), p.n(), Bound::Upper, schedule, cfg, |w| {
        let r = erank_dual_restriction_dim(p, w, cfg)?;
        Ok((r.value, r.certificate, r.stabilized))
    })
}

/// A value rounded to the grid `(1/b)·ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalitySnap {
    pub raw: Rational,
    pub denominator: u64,
    pub snapped: Rational,
    /// `|raw − snapped| ≤ 1/(2b)`.
    pub residual: Rational,
    /// Whether the series the value came from was declared converged.
    pub series_converged: bool,
}

/// Nearest point of `(1/b)·ℤ`, ties rounded up.
pub fn snap_to_grid(raw: &Rational, b: u64) -> RationalitySnap {
    let b_big = BigInt::from(b);
    let scaled = raw * Rational::from_integer(b_big.clone()) + ratio(1, 2);
    let snapped = Rational::new(scaled.floor().to_integer(), b_big);
    let residual = (raw - &snapped).abs();
    RationalitySnap { raw: raw.clone(), denominator: b, snapped, residual, series_converged: false }
}

/// Snaps the limit estimate of a series onto the grid generated by the
/// reciprocals of finite-subgroup orders. Returns `None` for an empty series.
pub fn rationality_snap(series: &DensitySeries, group: &GroupSpec) -> Option<RationalitySnap> {
    let raw = series.limit_estimate.as_ref()?;
    let mut snap = snap_to_grid(raw, group.finite_subgroup_lcm());
    snap.series_converged = series.is_converged();
    Some(snap)
}

/// Whether `v` is a multiple of `1/b`.
pub fn on_grid(v: &Rational, b: u64) -> bool {
    (v * Rational::from_integer(BigInt::from(b))).is_integer()
}

/// `|a − b|` for exact values, for reports.
pub fn gap(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{RingElem, RingMatrix};
    use crate::rational::int;
    use num_traits::Zero;

    fn scalar(group: &GroupSpec, terms: &[(i64, &[i64])]) -> ModulePresentation {
        ModulePresentation::new(RingMatrix::scalar(RingElem::from_ints(group, terms).unwrap())).unwrap()
    }

    #[test]
    fn schedule_validation() {
        assert!(validate_schedule(&[]).is_err());
        assert!(validate_schedule(&[0, 1]).is_err());
        assert!(validate_schedule(&[2, 2]).is_err());
        assert!(validate_schedule(&[1, 2, 4]).is_ok());
    }

    #[test]
    fn mrank_examples() {
        let cfg = EngineConfig::default();
        let z = GroupSpec::zd(1);
        let two = scalar(&z, &[(2, &[0])]);
        let s = mrank_of_presentation(&two, &[2, 4, 8], &cfg).unwrap();
        assert!(s.densities().all(|d| d.is_zero()));
        assert_eq!(s.status, SeriesStatus::Converged);

        let free = ModulePresentation::free(&z, 1).unwrap();
        let s = mrank_of_presentation(&free, &[1, 2, 4], &cfg).unwrap();
        assert!(s.densities().all(|d| *d == int(1)));
        assert_eq!(s.limit_estimate, Some(int(1)));

        let x_minus_1 = scalar(&z, &[(1, &[1]), (-1, &[0])]);
        let s = mrank_of_presentation(&x_minus_1, &[4, 8, 16], &cfg).unwrap();
        assert_eq!(s.limit_estimate, Some(int(0)));
    }

    #[test]
    fn vnd_finite_group_and_snap() {
        let cfg = EngineConfig::default();
        let c2 = GroupSpec::finite(vec![2]).unwrap();
        let p = scalar(&c2, &[(1, &[0]), (1, &[1])]);
        let s = vnd_series(&p, &[1], &cfg).unwrap();
        assert_eq!(s.limit_estimate, Some(ratio(1, 2)));
        assert!(s.is_converged());
        let snap = rationality_snap(&s, &c2).unwrap();
        assert_eq!(snap.snapped, ratio(1, 2));
        assert!(snap.residual.is_zero());
        assert!(on_grid(&snap.snapped, 2));
    }

    #[test]
    fn snap_rounding() {
        assert_eq!(snap_to_grid(&ratio(961, 1024), 1).snapped, int(1));
        assert_eq!(snap_to_grid(&ratio(961, 1024), 1).residual, ratio(63, 1024));
        assert_eq!(snap_to_grid(&ratio(1, 4), 2).snapped, ratio(1, 2));
        assert_eq!(snap_to_grid(&ratio(-1, 3), 1).snapped, int(0));
        assert_eq!(snap_to_grid(&ratio(5, 3), 3).residual, int(0));
    }

    #[test]
    fn erank_density_is_one_over_l() {
        let cfg = EngineConfig::default();
        let z = GroupSpec::zd(1);
        let p = scalar(&z, &[(1, &[0]), (2, &[1])]);
        let s = erank_series(&p, &[4, 8, 16, 32], &cfg).unwrap();
        for r in &s.records {
            assert_eq!(r.density, ratio(1, r.l as i64));
        }
        assert_eq!(s.bound, Bound::Upper);
    }
}
