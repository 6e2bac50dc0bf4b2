//! `folrank`: batch runner for the rank engines.
//!
//! Exit codes: 0 success, 1 input error, 2 exhausted budget (partial results
//! are still written), 3 a verification check failed.

mod job;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use folrank::groupring::RingMatrix;
use folrank::mmdim::mmdim_estimate;
use folrank::ranks::{
    self, erank_series, mrank_of_presentation, oracle_value, per_window_identity, rationality_snap, snap_to_grid,
    vnd_series, DensitySeries, EngineConfig, ModulePresentation, SeriesStatus,
};
use folrank::rational::{format_coeff, format_ratio, to_f64, Rational};
use serde::Serialize;

use job::Job;
use report::{
    compare_flags, CompareColumn, CompareReport, IdentityReport, IdentityRow, MmdimReport, OracleReport, SeriesReport,
    SuitesReport,
};

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Budget(String),
}

impl From<folrank::Error> for Failure {
    fn from(e: folrank::Error) -> Self {
        match e {
            folrank::Error::Budget { .. } => Failure::Budget(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Ok,
    Exhausted,
    CheckFailed,
}

#[derive(Parser)]
#[command(name = "folrank", version, about = "Mean rank, von Neumann–Lück rank and Elek rank of group-ring modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Window kernel densities dim ker(f on F)/|F|.
    Vnd(JobArgs),
    /// Quotient mean rank n − rank⟨F⁻¹A_f⟩/|F|.
    Mrank(JobArgs),
    /// Elek rank densities by dual restriction.
    Erank(JobArgs),
    /// Metric mean dimension estimate of the dual action.
    Mmdim(JobArgs),
    /// Per-window identity rank⟨F⁻¹A_f⟩ = m|F| − dim ker(f* on F).
    IdentityCheck(JobArgs),
    /// Closed-form limit where one is available.
    Oracle(JobArgs),
    /// mrank, vnd and erank limits next to the oracle value.
    Compare(JobArgs),
    /// Randomized identity, superadditivity and submodularity suites.
    VerifySuite(SuiteArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Job or matrix JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Window schedule, strictly increasing.
    #[arg(long = "L", value_delimiter = ',')]
    l: Option<Vec<u64>>,
    /// Convergence tolerance as p/q.
    #[arg(long)]
    tolerance: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Scale schedule for mmdim, e.g. 1/8,1/16.
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<String>>,
    /// Directory for the report JSON and CSV.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SuiteArgs {
    /// Unused by the suites; accepted for a uniform command line.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// A loaded job with command-line overrides applied.
struct Resolved {
    matrix: RingMatrix,
    schedule: Option<Vec<u64>>,
    epsilon: Option<Vec<Rational>>,
    cfg: EngineConfig,
}

fn resolve(args: &JobArgs) -> Result<Resolved, Failure> {
    let Job { matrix, schedule, tolerance, seed, epsilon, mut config } = job::load(&args.input)?;
    if let Some(t) = tolerance {
        config.tolerance = t;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(t) = &args.tolerance {
        config.tolerance = job::parse_tolerance(t)?;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    let schedule = args.l.clone().or(schedule);
    if let Some(s) = &schedule {
        ranks::validate_schedule(s)?;
    }
    let epsilon = match &args.epsilon {
        Some(items) => Some(job::parse_epsilons(items)?),
        None => epsilon,
    };
    Ok(Resolved { matrix, schedule, epsilon, cfg: config })
}

fn write_report<T: Serialize>(out: &Path, stem: &str, report: &T, csv: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(out).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    let mut json = serde_json::to_string_pretty(report).expect("reports serialize");
    json.push('\n');
    let write = |name: String, body: &str| {
        let path = out.join(name);
        std::fs::write(&path, body).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    };
    write(format!("folrank-{stem}.json"), &json)?;
    write(format!("folrank-{stem}.csv"), csv)
}

fn series_outcome(series: &DensitySeries) -> Outcome {
    match series.status {
        SeriesStatus::Converged => Outcome::Ok,
        SeriesStatus::ExhaustedBudget => Outcome::Exhausted,
    }
}

fn run_series(
    stem: &str,
    args: &JobArgs,
    engine: fn(&ModulePresentation, &[u64], &EngineConfig) -> folrank::Result<DensitySeries>,
) -> Result<Outcome, Failure> {
    let r = resolve(args)?;
    let p = ModulePresentation::new(r.matrix.clone())?;
    let schedule = r.schedule.unwrap_or_else(|| job::default_schedule(p.group()));
    let series = engine(&p, &schedule, &r.cfg)?;
    let snap = rationality_snap(&series, p.group());
    let report = SeriesReport::new(&series, &r.matrix, snap.as_ref(), r.cfg.seed);
    write_report(&args.out, stem, &report, &report.csv())?;
    println!(
        "{} limit_estimate {} status {}",
        report.quantity,
        report.limit_estimate.as_deref().unwrap_or("none"),
        report.status
    );
    if let Some(reason) = &report.stop_reason {
        println!("stop_reason: {reason}");
    }
    Ok(series_outcome(&series))
}

fn run_identity(args: &JobArgs) -> Result<Outcome, Failure> {
    let r = resolve(args)?;
    let group = r.matrix.group().clone();
    let schedule = r.schedule.unwrap_or_else(|| job::default_schedule(&group));
    let mut windows = Vec::new();
    let mut stop_reason = None;
    for &l in &schedule {
        let computed = group
            .folner_set_with_budget(l, r.cfg.max_window_elements)
            .and_then(|w| per_window_identity(&r.matrix, &w, &r.cfg).map(|c| (w.len(), c)));
        match computed {
            Ok((f_size, c)) => windows.push(IdentityRow {
                l,
                f_size,
                span_rank: c.span_rank,
                kernel_side: c.kernel_side,
                holds: c.holds,
            }),
            Err(e @ folrank::Error::Budget { .. }) => {
                stop_reason = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }
    let all_hold = windows.iter().all(|w| w.holds);
    let report = IdentityReport {
        quantity: "identity-check",
        group,
        presentation: r.matrix.clone(),
        windows,
        all_hold,
        status: if stop_reason.is_some() { "exhausted-budget" } else { "complete" },
        stop_reason,
    };
    write_report(&args.out, "identity-check", &report, &report.csv())?;
    for w in &report.windows {
        println!("L={} span_rank={} kernel_side={} holds={}", w.l, w.span_rank, w.kernel_side, w.holds);
    }
    Ok(if !all_hold {
        Outcome::CheckFailed
    } else if report.stop_reason.is_some() {
        Outcome::Exhausted
    } else {
        Outcome::Ok
    })
}

fn run_oracle(args: &JobArgs) -> Result<Outcome, Failure> {
    let r = resolve(args)?;
    let p = ModulePresentation::new(r.matrix.clone())?;
    let Some(value) = oracle_value(&p, r.cfg.seed)? else {
        return Err(Failure::Input(format!("no closed-form oracle for {:?}", p.group())));
    };
    let report = OracleReport {
        quantity: "oracle",
        group: p.group().clone(),
        presentation: r.matrix.clone(),
        seed: r.cfg.seed,
        value: format_ratio(&value),
    };
    write_report(&args.out, "oracle", &report, &format!("value\n{}\n", report.value))?;
    println!("{}", format_coeff(&value));
    Ok(Outcome::Ok)
}

fn run_compare(args: &JobArgs) -> Result<Outcome, Failure> {
    let r = resolve(args)?;
    let p = ModulePresentation::new(r.matrix.clone())?;
    let schedule = r.schedule.clone().unwrap_or_else(|| job::default_schedule(p.group()));
    let runs = [
        ("mrank", mrank_of_presentation(&p, &schedule, &r.cfg)?),
        ("vnd", vnd_series(&p, &schedule, &r.cfg)?),
        ("erank", erank_series(&p, &schedule, &r.cfg)?),
    ];
    let oracle = oracle_value(&p, r.cfg.seed)?;
    let mut values: Vec<(&'static str, Option<Rational>)> =
        runs.iter().map(|(name, s)| (*name, s.limit_estimate.clone())).collect();
    values.push(("oracle", oracle));
    let flags = compare_flags(&values, &r.cfg.tolerance);
    let grid = p.group().finite_subgroup_lcm();
    let columns: Vec<CompareColumn> = values
        .iter()
        .zip(runs.iter().map(|(_, s)| Some(s)).chain([None]))
        .map(|((name, v), series)| CompareColumn {
            name,
            value: v.as_ref().map(format_ratio),
            snapped: v.as_ref().map(|x| format_ratio(&snap_to_grid(x, grid).snapped)),
            status: series.map(|s| SeriesReport::new(s, &r.matrix, None, r.cfg.seed).status),
        })
        .collect();
    let report = CompareReport {
        quantity: "compare",
        group: p.group().clone(),
        presentation: r.matrix.clone(),
        tolerance: format_ratio(&r.cfg.tolerance),
        seed: r.cfg.seed,
        series: runs
            .iter()
            .map(|(_, s)| SeriesReport::new(s, &r.matrix, rationality_snap(s, p.group()).as_ref(), r.cfg.seed))
            .collect(),
        columns,
        flags,
    };
    write_report(&args.out, "compare", &report, &report.csv())?;
    for c in &report.columns {
        println!(
            "{:<7} {:<8} (raw {}) {}",
            c.name,
            c.snapped.as_deref().unwrap_or("-"),
            c.value.as_deref().unwrap_or("-"),
            c.status.unwrap_or("")
        );
    }
    for f in &report.flags {
        println!("flag: {f}");
    }
    let exhausted = runs.iter().any(|(_, s)| s.status == SeriesStatus::ExhaustedBudget);
    Ok(if exhausted { Outcome::Exhausted } else { Outcome::Ok })
}

fn run_mmdim(args: &JobArgs) -> Result<Outcome, Failure> {
    let r = resolve(args)?;
    let group = r.matrix.group().clone();
    let schedule = r.schedule.clone().unwrap_or_else(|| job::default_mmdim_schedule(&group));
    let eps_exact = r.epsilon.clone().unwrap_or_else(job::default_epsilons);
    let eps: Vec<f64> = eps_exact.iter().map(to_f64).collect();
    let est = mmdim_estimate(&r.matrix, &schedule, &eps, &r.cfg)?;
    let text =
        |e: f64| eps.iter().position(|&x| x == e).map(|i| format_ratio(&eps_exact[i])).unwrap_or_else(|| e.to_string());
    let report = MmdimReport::new(&est, &r.matrix, &schedule, &text, r.cfg.seed);
    write_report(&args.out, "mmdim", &report, &report.csv())?;
    println!("mmdim interval (approximate) [{:.6}, {:.6}]", est.lower, est.upper);
    Ok(Outcome::Ok)
}

fn run_suites(args: &SuiteArgs) -> Result<Outcome, Failure> {
    let cfg = EngineConfig { seed: args.seed, ..EngineConfig::default() };
    let suites = vec![
        ranks::suites::identity_suite(args.seed, args.cases, &cfg)?,
        ranks::suites::superadditivity_suite(args.seed, args.cases, &cfg)?,
        ranks::suites::submodularity_suite(args.seed, args.cases, &cfg)?,
    ];
    let all_pass = suites.iter().all(|s| s.failed == 0 && s.inconclusive == 0);
    let report = SuitesReport { quantity: "verify-suite", seed: args.seed, cases: args.cases, suites, all_pass };
    write_report(&args.out, "verify-suite", &report, &report.csv())?;
    for s in &report.suites {
        println!(
            "{}: {} cases, {} checks, {} failed, {} inconclusive",
            s.name, s.cases, s.checks, s.failed, s.inconclusive
        );
        for f in &s.failures {
            println!("  {f}");
        }
    }
    Ok(if all_pass { Outcome::Ok } else { Outcome::CheckFailed })
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("FOLRANK_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("FOLRANK_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = init_threads().and_then(|()| match &cli.command {
        Command::Vnd(a) => run_series("vnd", a, vnd_series),
        Command::Mrank(a) => run_series("mrank", a, mrank_of_presentation),
        Command::Erank(a) => run_series("erank", a, erank_series),
        Command::Mmdim(a) => run_mmdim(a),
        Command::IdentityCheck(a) => run_identity(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Compare(a) => run_compare(a),
        Command::VerifySuite(a) => run_suites(a),
    });
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Exhausted) => ExitCode::from(2),
        Ok(Outcome::CheckFailed) => ExitCode::from(3),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget exhausted: {msg}");
            ExitCode::from(2)
        }
    }
}
