//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use folrank::groupring::{RingElem, RingMatrix};
use folrank::groups::GroupSpec;
use folrank::mmdim::mmdim_estimate;
use folrank::ranks::{
    self, elek_kernel_density, erank_series, mrank_of_presentation, oracle_value, rationality_snap, submodule_series,
    vnd_series, EngineConfig, ModulePresentation,
};
use folrank::rational::{int, ratio, Rational};
use num_traits::{Signed, Zero};

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn scalar(group: &GroupSpec, terms: &[(i64, &[i64])]) -> ModulePresentation {
    ModulePresentation::new(RingMatrix::scalar(RingElem::from_ints(group, terms).unwrap())).unwrap()
}

fn one_plus_2t() -> ModulePresentation {
    scalar(&GroupSpec::zd(1), &[(1, &[0]), (2, &[1])])
}

fn x_minus_one_y_minus_one() -> ModulePresentation {
    let z2 = GroupSpec::zd(2);
    let row = vec![
        RingElem::from_ints(&z2, &[(1, &[1, 0]), (-1, &[0, 0])]).unwrap(),
        RingElem::from_ints(&z2, &[(1, &[0, 1]), (-1, &[0, 0])]).unwrap(),
    ];
    ModulePresentation::new(RingMatrix::from_rows(&z2, 2, vec![row]).unwrap()).unwrap()
}

fn c2_one_plus_t() -> ModulePresentation {
    scalar(&GroupSpec::finite(vec![2]).unwrap(), &[(1, &[0]), (1, &[1])])
}

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn err(e: folrank::Error) -> String {
    e.to_string()
}

fn criterion_1(cfg: &EngineConfig) -> Outcome {
    let p = one_plus_2t();
    let schedule = [4, 8, 16, 32, 64, 128, 256];
    let vnd = vnd_series(&p, &schedule, cfg).map_err(err)?;
    for r in &vnd.records {
        check(r.density.is_zero(), format!("vnd density {} at L={}", r.density, r.l))?;
    }
    let mrank = mrank_of_presentation(&p, &schedule, cfg).map_err(err)?;
    check(mrank.limit_estimate == Some(int(0)), format!("mrank limit {:?}", mrank.limit_estimate))?;
    let erank = erank_series(&p, &schedule, cfg).map_err(err)?;
    for r in &erank.records {
        check(r.density == ratio(1, r.l as i64), format!("erank density {} at L={}", r.density, r.l))?;
    }
    Ok("vnd 0, mrank limit 0, erank 1/L for L=4..256".into())
}

fn criterion_2(cfg: &EngineConfig) -> Outcome {
    let mut checked = 0;
    for group in [GroupSpec::zd(1), GroupSpec::zd(2)] {
        let p = ModulePresentation::free(&group, 1).map_err(err)?;
        let schedule = [1, 2, 4, 8];
        for series in [
            vnd_series(&p, &schedule, cfg).map_err(err)?,
            mrank_of_presentation(&p, &schedule, cfg).map_err(err)?,
            erank_series(&p, &schedule, cfg).map_err(err)?,
        ] {
            for r in &series.records {
                check(r.density == int(1), format!("{} = {} at L={}", series.quantity.tag(), r.density, r.l))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} windows, all densities 1"))
}

fn criterion_3(cfg: &EngineConfig) -> Outcome {
    for (group, schedule) in [(GroupSpec::zd(1), vec![4, 8, 16, 32, 64]), (GroupSpec::zd(2), vec![4, 8, 16, 32])] {
        let p = scalar(&group, &[(2, &vec![0; group.free_rank()])]);
        let mrank = mrank_of_presentation(&p, &schedule, cfg).map_err(err)?;
        let vnd = vnd_series(&p, &schedule, cfg).map_err(err)?;
        for r in mrank.records.iter().chain(&vnd.records) {
            check(r.density.is_zero(), format!("density {} at L={} over {group:?}", r.density, r.l))?;
        }
    }
    Ok("mrank and vnd 0 over Z and Z^2".into())
}

fn criterion_4(cfg: &EngineConfig) -> Outcome {
    let p = x_minus_one_y_minus_one();
    let oracle = oracle_value(&p, cfg.seed).map_err(err)?;
    check(oracle == Some(int(1)), format!("oracle {oracle:?}"))?;
    let schedule = [8, 16, 32];
    let series = vnd_series(&p, &schedule, cfg).map_err(err)?;
    let mut worst = String::new();
    for r in &series.records {
        let gap = (&r.density - int(1)).abs();
        check(gap <= ratio(4, r.l as i64), format!("|{} - 1| > 4/{}", r.density, r.l))?;
        worst = format!("{}", r.density);
    }
    let snap = rationality_snap(&series, p.group()).ok_or("empty series")?;
    check(snap.snapped == int(1), format!("snap to {}", snap.snapped))?;
    check(snap.residual < ratio(1, 16), format!("residual {}", snap.residual))?;
    Ok(format!("density {worst} at L=32, snap 1, residual {}", snap.residual))
}

fn criterion_5(cfg: &EngineConfig) -> Outcome {
    let p = c2_one_plus_t();
    let window = p.group().folner_set(1).map_err(err)?;
    let d = elek_kernel_density(&p, &window).map_err(err)?;
    check(d == ratio(1, 2), format!("density {d}"))?;
    let series = vnd_series(&p, &[1], cfg).map_err(err)?;
    check(series.is_converged(), "series not converged")?;
    let snap = rationality_snap(&series, p.group()).ok_or("empty series")?;
    check(snap.denominator == 2 && ranks::on_grid(&snap.raw, 2), format!("off grid: {}", snap.raw))?;
    check(snap.residual.is_zero(), format!("residual {}", snap.residual))?;
    Ok("vnd 1/2, residual 0".into())
}

fn suite_outcome(report: folrank::ranks::suites::SuiteReport) -> Outcome {
    let line = format!(
        "{}: {} cases, {} checks, {} failed, {} inconclusive",
        report.name, report.cases, report.checks, report.failed, report.inconclusive
    );
    if report.failed > 0 || report.inconclusive > 0 {
        return Err(format!("{line}; {:?}", report.failures));
    }
    Ok(line)
}

fn criterion_6(cfg: &EngineConfig) -> Outcome {
    suite_outcome(ranks::suites::identity_suite(SEED, 100, cfg).map_err(err)?)
}

fn criterion_7(cfg: &EngineConfig) -> Outcome {
    let a = suite_outcome(ranks::suites::superadditivity_suite(SEED, 100, cfg).map_err(err)?)?;
    let b = suite_outcome(ranks::suites::submodularity_suite(SEED, 100, cfg).map_err(err)?)?;
    Ok(format!("{a}; {b}"))
}

fn criterion_8(cfg: &EngineConfig) -> Outcome {
    let report = ranks::suites::erank_suite(SEED, 50, cfg).map_err(err)?;
    let line = format!("{} cases, {} failed, {} unstabilized", report.cases, report.failed, report.inconclusive);
    check(report.failed == 0, format!("{line}; {:?}", report.failures))?;
    check(report.inconclusive * 10 < report.cases, format!("{line}: too many unstabilized"))?;
    Ok(line)
}

fn criterion_9(cfg: &EngineConfig) -> Outcome {
    let cases: Vec<(&str, ModulePresentation, Vec<u64>)> = vec![
        ("1+2T", one_plus_2t(), vec![4, 8, 16, 32, 64, 128, 256]),
        ("free Z", ModulePresentation::free(&GroupSpec::zd(1), 1).unwrap(), vec![4, 8, 16]),
        ("2 over Z", scalar(&GroupSpec::zd(1), &[(2, &[0])]), vec![4, 8, 16, 32, 64]),
        ("2 over Z^2", scalar(&GroupSpec::zd(2), &[(2, &[0, 0])]), vec![4, 8, 16, 32]),
        ("[x-1, y-1]", x_minus_one_y_minus_one(), vec![8, 16, 32]),
        ("1+t over Z/2", c2_one_plus_t(), vec![1]),
    ];
    let mut worst = Rational::zero();
    for (name, p, schedule) in cases {
        let l_max = *schedule.last().unwrap();
        let sub = submodule_series(&p.relation_rows(), &schedule, cfg).map_err(err)?;
        let quotient = vnd_series(&p, &schedule, cfg).map_err(err)?;
        let (Some(s), Some(q)) = (sub.limit_estimate, quotient.limit_estimate) else {
            return Err(format!("{name}: missing limit"));
        };
        let gap = (&s + &q - int(p.n() as i64)).abs();
        check(gap <= ratio(2, l_max as i64), format!("{name}: {s} + {q} vs n = {} (gap {gap})", p.n()))?;
        if gap > worst {
            worst = gap;
        }
    }
    Ok(format!("largest gap {worst}"))
}

fn criterion_10(cfg: &EngineConfig) -> Outcome {
    let z = GroupSpec::zd(1);
    let eps: Vec<f64> = (1..=6).map(|k| 0.5f64.powi(k)).collect();
    let schedule = [4, 8];
    let cases = [
        ("f=0", RingMatrix::zero(&z, 1, 1), 1.0, Some(0.3)),
        ("f=2", RingMatrix::scalar(RingElem::from_ints(&z, &[(2, &[0])]).unwrap()), 0.0, None),
        ("f=1+2T", one_plus_2t().relations().clone(), 0.0, None),
    ];
    let mut lines = Vec::new();
    for (name, f, target, max_width) in cases {
        let est = mmdim_estimate(&f, &schedule, &eps, cfg).map_err(err)?;
        for r in &est.reports {
            check(
                r.lower_log <= r.upper_log + 1e-9,
                format!("{name}: log lower {} > upper {} at L={}, eps={}", r.lower_log, r.upper_log, r.l, r.epsilon),
            )?;
        }
        check(est.contains(target), format!("{name}: [{}, {}] misses {target}", est.lower, est.upper))?;
        if let Some(w) = max_width {
            check(est.width() <= w, format!("{name}: width {}", est.width()))?;
        }
        lines.push(format!(
            "{name} [{:.3}, {:.3}] raw [{:.3}, {:.3}]",
            est.lower, est.upper, est.raw_lower, est.raw_upper
        ));
    }
    Ok(lines.join(", "))
}

type Criterion = fn(&EngineConfig) -> Outcome;

fn main() -> ExitCode {
    let cfg = EngineConfig::default();
    let criteria: [(&str, Criterion, u64); 10] = [
        ("1+2T over Z: vnd 0, mrank 0, erank 1/L", criterion_1, 5),
        ("free module: all engines 1", criterion_2, 1),
        ("torsion quotient f=2 over Z, Z^2", criterion_3, 5),
        ("oracle convergence [x-1, y-1]", criterion_4, 60),
        ("finite group grid Z/2, 1+t", criterion_5, 1),
        ("per-window identity suite", criterion_6, 120),
        ("superadditivity and submodularity suites", criterion_7, 120),
        ("elek rank equality suite", criterion_8, 120),
        ("addition formula at the limit", criterion_9, 120),
        ("mmdim estimator sanity", criterion_10, 120),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&cfg);
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(detail)
            } else {
                Err(format!("{detail}; runtime {:.2}s exceeds {limit}s", elapsed.as_secs_f64()))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}; {:.2}s)", i + 1, elapsed.as_secs_f64()),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({detail}; {:.2}s)", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
