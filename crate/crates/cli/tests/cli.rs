use serde_json::Value;
use std::fs;
use std::process::{Command, Output};
use tritangle_cli::format::{parse_csv, CSV_HEADER};

fn tritangle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tritangle"))
        .args(args)
        .output()
        .expect("failed to run tritangle")
}

fn json(args: &[&str]) -> Value {
    let out = tritangle(args);
    assert!(
        out.status.success(),
        "tritangle {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing number `{key}` in {v}"))
}

#[test]
fn state_examples() {
    let ghz = json(&["state", "--family", "gghz", "--theta1", "0.7853981634"]);
    assert!((num(&ghz, "tau") - 1.0).abs() < 1e-9);
    assert_eq!(ghz["amplitudes"].as_array().unwrap().len(), 8);

    let ms = json(&["state", "--family", "ms", "--theta3", "0"]);
    assert!((num(&ms, "c12") - 1.0).abs() < 1e-9);
    assert_eq!(num(&ms, "tau"), 0.0);

    let product = json(&["state", "--amps", "1,0,0,0,0,0,0,0"]);
    for key in ["c12", "c13", "c23", "c1_23", "tau"] {
        assert_eq!(num(&product, key), 0.0, "{key}");
    }
    assert!(product["params"].is_null());
}

#[test]
fn svetlichny_examples() {
    let ghz = json(&["svetlichny", "--family", "gghz", "--theta1", "0.7853981634"]);
    assert!((num(&ghz, "s_max") - 5.656854).abs() < 1e-5);
    assert_eq!(ghz["violation"], true);
    assert_eq!(ghz["analytic_applies"], true);

    // τ = sin²2θ1 = 0.4
    let theta1 = (0.4f64.sqrt().asin() / 2.0).to_string();
    let g = json(&["svetlichny", "--family", "gghz", "--theta1", &theta1]);
    assert!((num(&g, "s_max") - 3.577709).abs() < 1e-5);
    assert_eq!(g["violation"], false);

    // τ = sin²θ3 = 0.2
    let theta3 = 0.2f64.sqrt().asin().to_string();
    let m = json(&["svetlichny", "--family", "ms", "--theta3", &theta3]);
    assert!((num(&m, "s_max") - 4.381780).abs() < 1e-5);
    assert_eq!(m["violation"], true);

    let custom = json(&["svetlichny", "--amps", "1,0,0,0,0,0,0,1", "--budget", "8"]);
    assert_eq!(custom["analytic_applies"], false);
    assert!(custom["s_analytic"].is_null());
}

#[test]
fn sweep_writes_csv_and_gnuplot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gghz.csv");
    let report = json(&[
        "sweep",
        "--family",
        "gghz",
        "--points",
        "21",
        "--out",
        out.to_str().unwrap(),
        "--gnuplot",
    ]);
    assert!(num(&report, "max_abs_gap") < 1e-3);

    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with(&format!("{CSV_HEADER}\n")));
    assert!(!text.contains('\r'));
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 21);

    let dip = rows
        .iter()
        .min_by(|a, b| a.s_analytic.unwrap().total_cmp(&b.s_analytic.unwrap()))
        .unwrap();
    let nearest = rows
        .iter()
        .min_by(|a, b| (a.tau - 1.0 / 3.0).abs().total_cmp(&(b.tau - 1.0 / 3.0).abs()))
        .unwrap();
    assert_eq!(dip, nearest);
    for r in &rows {
        assert!(r.gap.unwrap().abs() <= 1e-3);
        if r.tau <= 0.5 {
            assert!(!r.violation, "{r:?}");
        }
    }

    let script = fs::read_to_string(dir.path().join("gghz.csv.gp")).unwrap();
    assert!(script.contains("gghz.csv"));
}

#[test]
fn ms_sweep_violates_except_at_zero() {
    let out = tritangle(&["sweep", "--family", "ms", "--points", "21"]);
    assert!(out.status.success());
    let rows = parse_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(!rows[0].violation);
    assert!(rows[1..].iter().all(|r| r.violation));
}

#[test]
fn three_param_sweep_has_no_analytic_column() {
    let out = tritangle(&["sweep", "--family", "three-param", "--points", "3", "--theta2", "0.3", "--theta3", "1.1"]);
    assert!(out.status.success());
    let rows = parse_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(rows.iter().all(|r| r.s_analytic.is_none() && r.gap.is_none()));
}

#[test]
fn verify_bounds_examples() {
    let report = json(&["verify-bounds", "--samples", "25"]);
    assert_eq!(num(&report, "failures"), 0.0);
    assert!(num(&report, "worst_lower_slack") >= -1e-6);

    let ghz_corner = json(&["verify-bounds", "--theta1", "0.6", "--theta2", "1.5707963268", "--theta3", "1.5707963268"]);
    assert!(num(&ghz_corner, "tau") >= 1.0 / 3.0);
    assert!(num(&ghz_corner, "upper_slack").abs() < 1e-5);

    let ms_corner = json(&["verify-bounds", "--theta1", "0.7853981634", "--theta2", "1.5707963268", "--theta3", "0.4"]);
    assert!(num(&ms_corner, "lower_slack").abs() < 1e-5);
}

#[test]
fn estimate_examples() {
    let ghz = json(&["estimate", "--family", "gghz", "--theta1", "0.7853981634", "--shots", "1000000"]);
    assert!((num(&ghz, "tau_hat") - 1.0).abs() < 0.02);
    assert!((num(&ghz, "tau_true") - 1.0).abs() < 1e-9);
    assert_eq!(num(&ghz, "shots"), 1e6);

    let half = json(&["estimate", "--family", "gghz", "--theta1", "22.5", "--degrees", "--shots", "1000000"]);
    assert!((num(&half, "tau_hat") - 0.5).abs() < 0.02);

    let product = json(&["estimate", "--amps", "1,0,0,0,0,0,0,0", "--shots", "10000"]);
    assert!(num(&product, "tau_hat") <= 0.05);
    assert!(product["tau_true"].is_null());
}

#[test]
fn same_seed_same_bytes() {
    let args = ["svetlichny", "--family", "three-param", "--theta1", "0.3", "--theta2", "1.2", "--theta3", "2.0", "--budget", "16", "--seed", "7"];
    assert_eq!(tritangle(&args).stdout, tritangle(&args).stdout);
    let args = ["estimate", "--family", "gghz", "--theta1", "0.5", "--shots", "5000", "--seed", "9"];
    assert_eq!(tritangle(&args).stdout, tritangle(&args).stdout);
}

#[test]
fn bad_input_exits_nonzero() {
    let cases: &[(&[&str], &str)] = &[
        (&["state", "--family", "gghz"], "--theta1"),
        (&["state", "--amps", "1,0,0,zz,0,0,0,0"], "--amps"),
        (&["state", "--amps", "0,0,0,0,0,0,0,0"], "--amps"),
        (&["state", "--family", "ms", "--theta1", "1", "--theta3", "1"], "--theta1"),
        (&["svetlichny", "--family", "gghz", "--theta1", "1", "--budget", "0"], "budget"),
        (&["sweep", "--family", "gghz", "--points", "1"], "--points"),
        (&["sweep", "--family", "gghz", "--points", "2", "--out", "/nonexistent/dir/x.csv"], "--out"),
        (&["estimate", "--family", "gghz", "--theta1", "1", "--shots", "0"], "shot"),
        (&["state", "--family", "bogus", "--theta1", "1"], "bogus"),
    ];
    for (args, needle) in cases {
        let out = tritangle(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?}: stderr `{err}` lacks `{needle}`");
    }
}

#[test]
fn gnuplot_requires_out() {
    let out = tritangle(&["sweep", "--family", "gghz", "--points", "2", "--gnuplot"]);
    assert!(!out.status.success());
}

#[test]
fn negative_angles_are_accepted() {
    let v = json(&["state", "--family", "gghz", "--theta1", "-0.7853981634"]);
    assert!((num(&v, "tau") - 1.0).abs() < 1e-9);
}
