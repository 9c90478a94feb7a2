use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use zerodp::{CurveTable, Convention};

fn zdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zdp")).args(args).output().expect("run zdp")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn optimal_reports_closed_form() {
    let v = json(&zdp(&["optimal", "--delta", "0.75", "--sensitivity", "1", "--n", "1"]));
    assert_eq!(f(&v["alpha_star"]), 0.5);
    assert_eq!(f(&v["min_cost"]), 0.25);
    assert_eq!(f(&v["half_width"]), 1.0);
    assert_eq!(f(&v["density"]), 0.25);

    let v = json(&zdp(&["optimal", "--delta", "0.5", "--sensitivity", "1", "--n", "2"]));
    assert_eq!(f(&v["alpha_star"]), 0.0);
    assert_eq!(f(&v["min_cost"]), 0.333333333333);
}

#[test]
fn optimal_text_and_csv() {
    let out = zdp(&["optimal", "--delta", "0.75", "--format", "text"]);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["alpha_star", "0.5"]), "{text}");
    let out = zdp(&["--format", "csv", "optimal", "--delta", "0.75"]);
    assert_eq!(stdout(&out), "delta,sensitivity,n,alpha_star,half_width,density,min_cost\n0.75,1,1,0.5,1,0.25,0.25\n");
}

#[test]
fn domain_errors_exit_2() {
    let out = zdp(&["optimal", "--delta", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("delta must lie in (0,1)"));

    let out = zdp(&["sample", "--delta", "0.5", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("alpha must lie in [0, delta)"));

    assert_eq!(zdp(&["optimal", "--delta", "abc"]).status.code(), Some(2));
    assert_eq!(zdp(&["optimal"]).status.code(), Some(2));
    assert_eq!(zdp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zdp(&["compare", "--delta", "0.5", "--n", "1.5", "--convention", "exact"]).status.code(), Some(2));
    assert_eq!(zdp(&["sample", "--mechanism", "gaussian"]).status.code(), Some(2));
    assert_eq!(zdp(&["--help"]).status.code(), Some(0));
}

#[test]
fn sample_small_run_within_support() {
    let out = zdp(&["sample", "--mechanism", "palpha", "--delta", "0.5", "--sensitivity", "1", "--alpha", "0", "--count", "3", "--seed", "7"]);
    assert!(out.status.success());
    let xs: Vec<f64> = stdout(&out).lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(xs.len(), 3);
    assert!(xs.iter().all(|x| (-1.0..=1.0).contains(x)));
}

#[test]
fn sample_atom_fraction_and_determinism() {
    let args = ["sample", "--mechanism", "palpha", "--delta", "0.9", "--alpha", "0.8", "--count", "1000000", "--seed", "1"];
    let a = zdp(&args);
    let b = zdp(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let zeros = text.lines().filter(|l| *l == "0").count() as f64 / 1e6;
    assert!((zeros - 0.8).abs() <= 0.0012, "{zeros}");

    let c = zdp(&["sample", "--delta", "0.9", "--alpha", "0.8", "--count", "100", "--seed", "1", "--stream", "1"]);
    assert_ne!(c.stdout, a.stdout[..c.stdout.len()]);
}

#[test]
fn sample_optimal_and_gaussian() {
    let out = zdp(&["sample", "--delta", "0.9", "--optimal", "--n", "2", "--count", "10000", "--seed", "3"]);
    let text = stdout(&out);
    let zeros = text.lines().filter(|l| *l == "0").count() as f64 / 1e4;
    // alpha* = 3 * 0.9 - 2 = 0.7
    assert!((zeros - 0.7).abs() < 0.02, "{zeros}");

    let out = zdp(&["sample", "--mechanism", "gaussian", "--delta", "0.25", "--count", "5", "--seed", "3"]);
    assert_eq!(stdout(&out).lines().count(), 5);
    assert_eq!(zdp(&["sample", "--alpha", "0.1", "--optimal", "--delta", "0.5"]).status.code(), Some(2));
}

#[test]
fn compare_tables() {
    let v = json(&zdp(&["compare", "--delta", "0.25", "--sensitivity", "1", "--n", "1"]));
    assert_eq!(f(&v["rows"][0]["cost"]), 2.0);
    assert_eq!(f(&v["rows"][1]["cost"]), 1.0);
    assert_eq!(f(&v["ratio"]), 0.5);

    let v = json(&zdp(&["compare", "--delta", "0.25", "--sensitivity", "1", "--n", "2"]));
    assert_eq!(f(&v["rows"][0]["cost"]), 4.0);
    assert_eq!(f(&v["rows"][1]["cost"]), 1.33333333333);
    assert_eq!(f(&v["ratio"]), 0.333333333333);

    let v = json(&zdp(&["compare", "--delta", "0.9", "--sensitivity", "1", "--n", "1"]));
    assert_eq!(f(&v["rows"][0]["cost"]), 0.555555555556);
    assert_eq!(f(&v["rows"][1]["cost"]), 0.1);
    assert_eq!(f(&v["ratio"]), 0.18);

    let out = zdp(&["compare", "--delta", "0.25", "--format", "csv"]);
    assert_eq!(stdout(&out), "mechanism,cost,ratio\ngaussian,2,1\noptimal,1,0.5\n");

    let v = json(&zdp(&["compare", "--delta", "0.25", "--convention", "exact"]));
    assert_eq!(v["convention"], "exact");
    assert_eq!(f(&v["rows"][0]["cost"]), 1.59576912161);
}

#[test]
fn curve_file_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    for (n, checks) in [(1.0, vec![(0.3, 0.5), (0.75, 0.375)]), (2.0, vec![(0.3, 1.0 / 3.0), (0.9, 0.18225)])] {
        let path = dir.path().join(format!("curve{n}.csv"));
        let out = zdp(&["curve", "--n", &n.to_string(), "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("delta,optimal_cost,gaussian_cost,ratio\n0.01,"));
        let parsed = CurveTable::read_csv(text.as_bytes(), n, 1.0).unwrap();
        let memory = CurveTable::build(n, 1.0, 0.01, 0.99, 0.01, Convention::PaperSigma).unwrap();
        assert_eq!(parsed.rows.len(), 99);
        for (a, b) in parsed.rows.iter().zip(&memory.rows) {
            assert!((a.ratio - b.ratio).abs() <= 5e-12 * b.ratio);
            assert!((a.delta - b.delta).abs() <= 5e-12 * b.delta);
        }
        for (delta, ratio) in checks {
            let row = parsed.rows.iter().find(|r| r.delta == delta).unwrap();
            assert!((row.ratio - ratio).abs() < 1e-11, "{delta}: {}", row.ratio);
        }
    }
}

#[test]
fn curve_errors() {
    assert_eq!(zdp(&["curve", "--delta-min", "0.6", "--delta-max", "0.5"]).status.code(), Some(2));
    assert_eq!(zdp(&["curve", "--step", "0"]).status.code(), Some(2));
    let out = zdp(&["curve", "--out", "/nonexistent-dir/sub/curve.csv"]);
    assert_eq!(out.status.code(), Some(3));
    let out = zdp(&["curve", "--delta-min", "0.1", "--delta-max", "0.3", "--step", "0.1"]);
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn audit_builtin_mechanisms() {
    let v = json(&zdp(&["audit", "--mechanism", "palpha", "--delta", "0.5", "--count", "1000000", "--seed", "2"]));
    assert!((f(&v["delta_hat"]) - 0.5).abs() <= 0.02, "{v}");
    assert_eq!(v["method"], "EmpiricalHistogram");
    assert_eq!(v["sample_count"], 1_000_000);

    let v = json(&zdp(&["audit", "--mechanism", "gaussian", "--sigma", "2", "--sensitivity", "1", "--seed", "2"]));
    assert!((f(&v["delta_hat"]) - 0.197).abs() <= 0.02, "{v}");

    let v = json(&zdp(&["audit", "--mechanism", "gaussian", "--sigma", "2", "--analytic"]));
    assert_eq!(f(&v["delta_hat"]), 0.197412651366);
    assert_eq!(v["method"], "AnalyticGaussian");
    assert_eq!(v["sample_count"], 0);

    let v = json(&zdp(&["audit", "--mechanism", "palpha", "--delta", "0.3", "--alpha", "0.1", "--analytic"]));
    assert_eq!(f(&v["delta_hat"]), 0.3);
}

#[test]
fn audit_sample_files() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.txt");
    let out = zdp(&["sample", "--delta", "0.6", "--alpha", "0.2", "--count", "200000", "--seed", "9"]);
    std::fs::write(&samples, &out.stdout).unwrap();
    let v = json(&zdp(&["audit", "--input", samples.to_str().unwrap()]));
    assert!((f(&v["delta_hat"]) - 0.6).abs() <= 0.03, "{v}");
    assert_eq!(v["sample_count"], 200_000);

    let garbled = dir.path().join("garbled.txt");
    let mut file = std::fs::File::create(&garbled).unwrap();
    writeln!(file, "0.5\n-0.25\nnot-a-number\n0.1").unwrap();
    let out = zdp(&["audit", "--input", garbled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains(":3:"), "{}", stderr(&out));

    let out = zdp(&["audit", "--input", dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(zdp(&["audit"]).status.code(), Some(2));
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["zdp", "compare", "--delta", "0.4", "--n", "2", "--format", "text"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = zerodp::cli::run(args, &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, zdp(&args[1..]).stdout);
}
