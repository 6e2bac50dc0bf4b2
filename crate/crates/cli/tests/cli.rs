use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn folrank(args: &[&str], out: &Path, threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_folrank"));
    cmd.args(args).arg("--out").arg(out);
    match threads {
        Some(n) => cmd.env("FOLRANK_THREADS", n.to_string()),
        None => cmd.env_remove("FOLRANK_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn report(dir: &Path, stem: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("folrank-{stem}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn vnd_on_one_plus_2t() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("one_plus_2T.json");
    let o = folrank(&["vnd", "--input", input.to_str().unwrap(), "--L", "4,8,16,32"], dir.path(), None);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let r = report(dir.path(), "vnd");
    assert_eq!(r["limit_estimate"], "0/1");
    assert_eq!(r["status"], "converged");
    assert_eq!(r["quantity"], "vnd-kernel-density");
    let series = r["series"].as_array().unwrap();
    assert_eq!(series.len(), 4);
    for (row, l) in series.iter().zip([4, 8, 16, 32]) {
        assert_eq!(row["L"], l);
        assert_eq!(row["F_size"], l);
        assert_eq!(row["numerator"], "0");
        assert_eq!(row["density"], "0/1");
    }
    assert_eq!(r["snap"]["snapped"], "0/1");
    let csv = std::fs::read_to_string(dir.path().join("folrank-vnd.csv")).unwrap();
    assert!(csv.starts_with("L,F_size,numerator,density"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn oracle_prints_the_generic_rank_value() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("xy_minus_one.json");
    let o = folrank(&["oracle", "--input", input.to_str().unwrap()], dir.path(), None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    assert_eq!(report(dir.path(), "oracle")["value"], "1/1");
}

#[test]
fn compare_tables() {
    let cases = [("one_plus_2T.json", "0/1"), ("free.json", "1/1"), ("c2_one_plus_t.json", "1/2")];
    for (name, expected) in cases {
        let dir = tempfile::tempdir().unwrap();
        let input = fixture(name);
        let o = folrank(&["compare", "--input", input.to_str().unwrap()], dir.path(), None);
        assert_eq!(o.status.code(), Some(0), "{name}: {o:?}");
        let r = report(dir.path(), "compare");
        let columns = r["columns"].as_array().unwrap();
        assert_eq!(columns.len(), 4);
        for c in columns {
            assert_eq!(c["snapped"], expected, "{name}: {c}");
        }
        assert!(r["flags"].as_array().unwrap().is_empty(), "{name}: {}", r["flags"]);
    }
    // On the finite group the one-window values are exact.
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("c2_one_plus_t.json");
    folrank(&["compare", "--input", input.to_str().unwrap()], dir.path(), None);
    let r = report(dir.path(), "compare");
    assert_eq!(r["columns"][1]["value"], "1/2");
    assert_eq!(r["columns"][3]["value"], "1/2");
}

#[test]
fn verify_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = folrank(&["verify-suite", "--seed", "7", "--cases", "100"], dir.path(), None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(dir.path(), "verify-suite");
    assert_eq!(r["all_pass"], true);
    assert_eq!(r["suites"].as_array().unwrap().len(), 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, cmd: &str| folrank(&[cmd, "--input", fixture(name).to_str().unwrap()], dir.path(), None);

    let o = run("two_over_z2.json", "mrank");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(dir.path(), "mrank")["limit_estimate"], "0/1");

    let o = run("budget_bounded.json", "vnd");
    assert_eq!(o.status.code(), Some(2));
    let r = report(dir.path(), "vnd");
    assert_eq!(r["status"], "exhausted-budget");
    assert_eq!(r["series"].as_array().unwrap().len(), 2);

    for (name, needle) in [("malformed.json", "shedule"), ("malformed_syntax.json", "line 5")] {
        let o = run(name, "vnd");
        assert_eq!(o.status.code(), Some(1), "{name}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains(needle) && err.contains("line"), "{name}: {err}");
    }

    let missing = folrank(&["vnd", "--input", "/nonexistent/job.json"], dir.path(), None);
    assert_eq!(missing.status.code(), Some(1));
    let bad_schedule =
        folrank(&["vnd", "--input", fixture("one_plus_2T.json").to_str().unwrap(), "--L", "8,4"], dir.path(), None);
    assert_eq!(bad_schedule.status.code(), Some(1));
    let bad_tol = folrank(
        &["vnd", "--input", fixture("one_plus_2T.json").to_str().unwrap(), "--tolerance", "0"],
        dir.path(),
        None,
    );
    assert_eq!(bad_tol.status.code(), Some(1));
    let no_input = folrank(&["vnd"], dir.path(), None);
    assert_eq!(no_input.status.code(), Some(1));
}

#[test]
fn reports_are_identical_across_thread_counts() {
    let input = fixture("xy_minus_one.json");
    for cmd in ["vnd", "mrank", "erank", "mmdim"] {
        let mut outputs = Vec::new();
        for threads in [1, 4] {
            let dir = tempfile::tempdir().unwrap();
            let mut args = vec![cmd, "--input", input.to_str().unwrap(), "--seed", "3"];
            if cmd == "mmdim" {
                args.extend(["--L", "2,3", "--epsilon", "1/4,1/8"]);
            }
            folrank(&args, dir.path(), Some(threads));
            let json = std::fs::read(dir.path().join(format!("folrank-{cmd}.json"))).unwrap();
            let csv = std::fs::read(dir.path().join(format!("folrank-{cmd}.csv"))).unwrap();
            outputs.push((json, csv));
        }
        assert_eq!(outputs[0], outputs[1], "{cmd}");
    }
}

#[test]
fn mmdim_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("free.json");
    let o = folrank(
        &["mmdim", "--input", input.to_str().unwrap(), "--L", "4,8", "--epsilon", "1/8,1/16"],
        dir.path(),
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let csv = std::fs::read_to_string(dir.path().join("folrank-mmdim.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "L,F_size,epsilon,lower_count,upper_log,lower_slope,upper_slope");
    assert_eq!(csv.lines().count(), 5);
    let r = report(dir.path(), "mmdim");
    let (lo, hi) = (r["interval_approx"][0].as_f64().unwrap(), r["interval_approx"][1].as_f64().unwrap());
    assert!(lo <= 1.0 + 1e-9 && 1.0 - 1e-9 <= hi, "[{lo}, {hi}]");
    let bad = folrank(&["mmdim", "--input", input.to_str().unwrap(), "--epsilon", "2"], dir.path(), None);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn identity_check_over_windows() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("xy_minus_one.json");
    let o = folrank(&["identity-check", "--input", input.to_str().unwrap(), "--L", "2,4"], dir.path(), None);
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path(), "identity-check");
    assert_eq!(r["all_hold"], true);
    assert_eq!(r["windows"].as_array().unwrap().len(), 2);
}

#[test]
fn oracle_unavailable_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(&path, r#"{"group":{"family":"Heisenberg"},"rows":1,"cols":1,"entries":[]}"#).unwrap();
    let o = folrank(&["oracle", "--input", path.to_str().unwrap()], dir.path(), None);
    assert_eq!(o.status.code(), Some(1));
}
