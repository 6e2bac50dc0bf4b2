//! Report shapes. Exact values are `p/q` strings; floats appear only in mmdim
//! fields whose names end in `_approx`.

use folrank::exactla::RankMethod;
use folrank::groupring::RingMatrix;
use folrank::groups::GroupSpec;
use folrank::mmdim::MmdimEstimate;
use folrank::ranks::suites::SuiteReport;
use folrank::ranks::{Bound, DensitySeries, RationalitySnap, SeriesStatus};
use folrank::rational::{format_ratio, Rational};
use serde::Serialize;

fn status_tag(s: SeriesStatus) -> &'static str {
    match s {
        SeriesStatus::Converged => "converged",
        SeriesStatus::ExhaustedBudget => "exhausted-budget",
    }
}

#[derive(Serialize)]
pub struct SeriesRow {
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "F_size")]
    pub f_size: usize,
    pub numerator: String,
    pub density: String,
    pub running_bound: String,
    pub primes: Vec<u64>,
    pub method: Option<RankMethod>,
    pub agreement: Option<bool>,
    pub stabilized: bool,
}

#[derive(Serialize)]
pub struct SnapReport {
    pub raw: String,
    pub denominator: u64,
    pub snapped: String,
    pub residual: String,
    pub series_converged: bool,
}

impl From<&RationalitySnap> for SnapReport {
    fn from(s: &RationalitySnap) -> Self {
        SnapReport {
            raw: format_ratio(&s.raw),
            denominator: s.denominator,
            snapped: format_ratio(&s.snapped),
            residual: format_ratio(&s.residual),
            series_converged: s.series_converged,
        }
    }
}

#[derive(Serialize)]
pub struct SeriesReport {
    pub quantity: &'static str,
    pub group: GroupSpec,
    pub presentation: RingMatrix,
    pub n: usize,
    pub bound: Bound,
    pub tolerance: String,
    pub seed: u64,
    pub series: Vec<SeriesRow>,
    pub limit_estimate: Option<String>,
    pub snap: Option<SnapReport>,
    pub status: &'static str,
    pub stop_reason: Option<String>,
}

impl SeriesReport {
    pub fn new(series: &DensitySeries, presentation: &RingMatrix, snap: Option<&RationalitySnap>, seed: u64) -> Self {
        let rows = series
            .records
            .iter()
            .zip(&series.running_bound)
            .map(|(r, bound)| SeriesRow {
                l: r.l,
                f_size: r.f_size,
                numerator: r.numerator.to_string(),
                density: format_ratio(&r.density),
                running_bound: format_ratio(bound),
                primes: r.certificate.as_ref().map(|c| c.primes.clone()).unwrap_or_default(),
                method: r.certificate.as_ref().map(|c| c.method),
                agreement: r.certificate.as_ref().map(|c| c.agreement),
                stabilized: r.stabilized,
            })
            .collect();
        SeriesReport {
            quantity: series.quantity.tag(),
            group: series.group.clone(),
            presentation: presentation.clone(),
            n: series.n,
            bound: series.bound,
            tolerance: format_ratio(&series.tolerance),
            seed,
            series: rows,
            limit_estimate: series.limit_estimate.as_ref().map(format_ratio),
            snap: snap.map(SnapReport::from),
            status: status_tag(series.status),
            stop_reason: series.stop_reason.clone(),
        }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("L,F_size,numerator,density,running_bound,stabilized\n");
        for r in &self.series {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.l, r.f_size, r.numerator, r.density, r.running_bound, r.stabilized
            ));
        }
        out
    }
}

#[derive(Serialize)]
pub struct IdentityRow {
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "F_size")]
    pub f_size: usize,
    pub span_rank: usize,
    pub kernel_side: usize,
    pub holds: bool,
}

#[derive(Serialize)]
pub struct IdentityReport {
    pub quantity: &'static str,
    pub group: GroupSpec,
    pub presentation: RingMatrix,
    pub windows: Vec<IdentityRow>,
    pub all_hold: bool,
    pub status: &'static str,
    pub stop_reason: Option<String>,
}

impl IdentityReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("L,F_size,span_rank,kernel_side,holds\n");
        for r in &self.windows {
            out.push_str(&format!("{},{},{},{},{}\n", r.l, r.f_size, r.span_rank, r.kernel_side, r.holds));
        }
        out
    }
}

#[derive(Serialize)]
pub struct OracleReport {
    pub quantity: &'static str,
    pub group: GroupSpec,
    pub presentation: RingMatrix,
    pub seed: u64,
    pub value: String,
}

#[derive(Serialize)]
pub struct CompareColumn {
    pub name: &'static str,
    /// Limit estimate (series) or closed form (oracle).
    pub value: Option<String>,
    /// `value` rounded to the rationality grid of the group.
    pub snapped: Option<String>,
    pub status: Option<&'static str>,
}

#[derive(Serialize)]
pub struct CompareReport {
    pub quantity: &'static str,
    pub group: GroupSpec,
    pub presentation: RingMatrix,
    pub tolerance: String,
    pub seed: u64,
    pub columns: Vec<CompareColumn>,
    /// Pairs of columns whose values differ by more than the tolerance.
    pub flags: Vec<String>,
    pub series: Vec<SeriesReport>,
}

impl CompareReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("column,value,snapped,status\n");
        for c in &self.columns {
            out.push_str(&format!(
                "{},{},{},{}\n",
                c.name,
                c.value.as_deref().unwrap_or(""),
                c.snapped.as_deref().unwrap_or(""),
                c.status.unwrap_or("")
            ));
        }
        out
    }
}

pub fn compare_flags(columns: &[(&'static str, Option<Rational>)], tolerance: &Rational) -> Vec<String> {
    let mut flags = Vec::new();
    for (i, (a, va)) in columns.iter().enumerate() {
        for (b, vb) in &columns[i + 1..] {
            if let (Some(x), Some(y)) = (va, vb) {
                let gap = folrank::ranks::gap(x, y);
                if gap > *tolerance {
                    flags.push(format!("{a} vs {b}: gap {}", format_ratio(&gap)));
                }
            }
        }
    }
    flags
}

#[derive(Serialize)]
pub struct MmdimCell {
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "F_size")]
    pub f_size: usize,
    pub epsilon: String,
    pub lower_count: String,
    pub greedy_count: usize,
    pub grid_count: String,
    pub samples: usize,
    pub lower_log_approx: f64,
    pub upper_log_approx: f64,
}

#[derive(Serialize)]
pub struct MmdimSlope {
    pub epsilon: String,
    pub lower_slope_approx: f64,
    pub upper_slope_approx: f64,
}

#[derive(Serialize)]
pub struct MmdimReport {
    pub quantity: &'static str,
    pub group: GroupSpec,
    pub presentation: RingMatrix,
    pub seed: u64,
    pub schedule: Vec<u64>,
    pub cells: Vec<MmdimCell>,
    pub slopes: Vec<MmdimSlope>,
    pub interval_approx: (f64, f64),
    pub raw_interval_approx: (f64, f64),
    pub envelope_approx: (f64, f64),
}

impl MmdimReport {
    pub fn new(
        est: &MmdimEstimate,
        presentation: &RingMatrix,
        schedule: &[u64],
        eps_text: &dyn Fn(f64) -> String,
        seed: u64,
    ) -> Self {
        MmdimReport {
            quantity: "mmdim",
            group: presentation.group().clone(),
            presentation: presentation.clone(),
            seed,
            schedule: schedule.to_vec(),
            cells: est
                .reports
                .iter()
                .map(|r| MmdimCell {
                    l: r.l,
                    f_size: r.f_size,
                    epsilon: eps_text(r.epsilon),
                    lower_count: r.lower_count.to_string(),
                    greedy_count: r.greedy_count,
                    grid_count: r.grid_count.to_string(),
                    samples: r.samples,
                    lower_log_approx: r.lower_log,
                    upper_log_approx: r.upper_log,
                })
                .collect(),
            slopes: est
                .slopes
                .iter()
                .map(|s| MmdimSlope {
                    epsilon: eps_text(s.epsilon),
                    lower_slope_approx: s.lower_slope,
                    upper_slope_approx: s.upper_slope,
                })
                .collect(),
            interval_approx: (est.lower, est.upper),
            raw_interval_approx: (est.raw_lower, est.raw_upper),
            envelope_approx: est.envelope,
        }
    }

    /// `L,F_size,epsilon,lower_count,upper_log,lower_slope,upper_slope`; the
    /// last three columns are approximate.
    pub fn csv(&self) -> String {
        let mut out = String::from("L,F_size,epsilon,lower_count,upper_log,lower_slope,upper_slope\n");
        for c in &self.cells {
            let slope = self.slopes.iter().find(|s| s.epsilon == c.epsilon).expect("slope per epsilon");
            out.push_str(&format!(
                "{},{},{},{},{:.12},{:.12},{:.12}\n",
                c.l,
                c.f_size,
                c.epsilon,
                c.lower_count,
                c.upper_log_approx,
                slope.lower_slope_approx,
                slope.upper_slope_approx
            ));
        }
        out
    }
}

#[derive(Serialize)]
pub struct SuitesReport {
    pub quantity: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteReport>,
    pub all_pass: bool,
}

impl SuitesReport {
    pub fn csv(&self) -> String {
        let mut out = String::from("suite,cases,checks,passed,failed,inconclusive\n");
        for s in &self.suites {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.name, s.cases, s.checks, s.passed, s.failed, s.inconclusive
            ));
        }
        out
    }
}
