//! Black-box tests of the `logharm` binary: exit codes, determinism,
//! output formats.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_logharm")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const TRIVIAL: &str = r#"{"variant":"nonvanishing","h":{"preset":"IDENTITY"},"omega":{"preset":"CONST","params":{"c":[0.0,0.0]}}}"#;

#[test]
fn norm_trivial_reports_one_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", TRIVIAL);
    let out = run(&[
        "norm",
        "--manifest",
        &m,
        "--grid-radii",
        "32",
        "--grid-angles",
        "64",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = report["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() < 1e-6);
    assert_eq!(report["boundary_divergent"], serde_json::Value::Bool(false));
}

#[test]
fn malformed_manifest_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "bad.json", "{ this is not json");
    let out = run(&["norm", "--manifest", &m]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let missing = dir.path().join("nope.json").to_str().unwrap().to_string();
    let out = run(&["norm", "--manifest", &missing]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bound_violation_exits_one() {
    // h = 20z is far outside the class the 11-bound covers:
    // the norm is sup (1-r^2)|20| = 20
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "outside.json",
        r#"{"variant":"nonvanishing","h":{"series":[[0,0],[20,0]]},"omega":{"preset":"CONST","params":{"c":[0.0,0.0]}}}"#,
    );
    let out = run(&[
        "norm",
        "--manifest",
        &m,
        "--grid-radii",
        "48",
        "--grid-angles",
        "96",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn random_suite_small_run_is_deterministic() {
    let base = [
        "random-suite",
        "--seed",
        "7",
        "--count",
        "3",
        "--grid-radii",
        "16",
        "--grid-angles",
        "48",
        "--refine-iters",
        "10",
    ];
    let a = run(&base);
    let b = run(&base);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["violations"], serde_json::json!(0));
    assert_eq!(report["count"], serde_json::json!(3));
    assert!(report["max_norm"].as_f64().unwrap() <= 11.0 + 1e-6);
}

#[test]
fn random_suite_accepts_explicit_instance_list() {
    let dir = tempfile::tempdir().unwrap();
    let list = write(
        dir.path(),
        "instances.json",
        r#"[{"eps_zeros":[[0.0,0.0],[0.5,0.2]],"omega_zeros":[[0.3,-0.4]]}]"#,
    );
    let out = run(&[
        "random-suite",
        "--instances",
        &list,
        "--grid-radii",
        "16",
        "--grid-angles",
        "48",
        "--refine-iters",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["count"], serde_json::json!(1));
    assert_eq!(report["seed"], serde_json::Value::Null);
}

#[test]
fn verify_growth_json_confirms_proof_reading() {
    let out = run(&["verify-growth", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports[0]["confirmed_reading"], serde_json::json!("proof"));
    assert!(reports[0]["max_violation"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn verify_sharpness_csv_table() {
    let out = run(&[
        "verify-sharpness",
        "--t",
        "0.5,0.9",
        "--resolution",
        "64",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,r,E\n"));
    assert!(text.lines().count() > 64);
}

#[test]
fn starlike_counterexample_report() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "counter.json",
        r#"{"variant":"origin_fixed","h":{"preset":"LOG1P"},"omega":{"preset":"NEGZ"}}"#,
    );
    let out = run(&[
        "starlike",
        "--manifest",
        &m,
        "--grid-radii",
        "32",
        "--grid-angles",
        "96",
        "--oracle-radius",
        "0.5",
        "--oracle-steps",
        "512",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        report["report"]["verdict"],
        serde_json::json!("FIELD_NEGATIVE")
    );
    assert!(report["report"]["witness"][0].as_f64().unwrap() < -0.5);
}

#[test]
fn render_outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let svg1 = dir.path().join("a.svg");
    let svg2 = dir.path().join("b.svg");
    for p in [&svg1, &svg2] {
        let out = run(&[
            "render",
            "--alpha",
            "0.6",
            "--grid-angles",
            "64",
            "--format",
            "svg",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&svg1).unwrap();
    let b = std::fs::read(&svg2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);

    let out = run(&[
        "render",
        "--alpha",
        "0.6",
        "--grid-angles",
        "64",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("r,theta,re,im\n"));
}

#[test]
fn render_without_target_exits_two() {
    let out = run(&["render"]);
    assert_eq!(out.status.code(), Some(2));
}
