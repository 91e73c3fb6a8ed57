use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conecd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_file(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn json_stdout(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn build_cone_reports_total_mass() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("g.json");
    let o = run(&[
        "build-cone",
        "--kind",
        "euclidean",
        "--base",
        "circle:64",
        "--cells",
        "32",
        "--rmax",
        "2",
        "--N",
        "1",
        "--out",
        grid.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json_stdout(&o);
    assert!((v["total_mass"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-9);
    assert!(grid.exists());

    let o = run(&[
        "build-cone",
        "--kind",
        "spherical",
        "--base",
        "circle:64",
        "--cells",
        "32",
        "--N",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    assert!((json_stdout(&o)["total_mass"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-9);
}

#[test]
fn missing_exponent_is_a_usage_error() {
    let o = run(&["build-cone", "--kind", "euclidean", "--base", "circle:8"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--N"));
    assert_eq!(code(&run(&["no-such-command"])), 2);
}

#[test]
fn flat_cone_passes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let o = run(&[
        "cd-check",
        "--kind",
        "euclidean",
        "--base",
        "circle:64",
        "--cells",
        "32",
        "--K",
        "0",
        "--N",
        "2",
        "--trials",
        "20",
        "--seed",
        "7",
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        dir.path().join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("min deficit"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("trial,t,Nprime,K,lhs,rhs,deficit,slack,verdict"));
    assert_eq!(text.lines().count(), 1 + 2 * 20 * 3 * 3);
    let r = json_file(&dir.path().join("r.json"));
    assert_eq!(r["report"]["records"].as_array().unwrap().len(), 20 * 3 * 3);
    assert_eq!(r["config"]["seed"], 7);
}

#[test]
fn overcurved_claim_fails_with_trial() {
    let o = run(&[
        "cd-check",
        "--kind",
        "spherical",
        "--base",
        "circle:64",
        "--cells",
        "32",
        "--K",
        "2",
        "--N",
        "2",
        "--preset",
        "near-antipodal",
    ]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(stderr(&o).contains("trial 0"));
}

#[test]
fn zero_trials_is_empty_and_passes() {
    let o = run(&[
        "cd-check",
        "--kind",
        "euclidean",
        "--base",
        "circle:8",
        "--cells",
        "4",
        "--K",
        "0",
        "--N",
        "2",
        "--trials",
        "0",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        json_stdout(&o)["report"]["records"]
            .as_array()
            .unwrap()
            .len(),
        0
    );
}

#[test]
fn antipodal_presets_follow_the_pattern() {
    let o = run(&[
        "apex-scan",
        "--kind",
        "euclidean",
        "--base",
        "circle:64",
        "--cells",
        "32",
        "--preset",
        "antipodal-dirac",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json_stdout(&o);
    assert_eq!(v["apex_mass"].as_f64(), Some(1.0));
    assert!(v["pattern_ok"].as_bool().unwrap());

    let o = run(&[
        "apex-scan",
        "--kind",
        "spherical",
        "--base",
        "circle:64",
        "--cells",
        "32",
        "--preset",
        "antipodal-dirac",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = &json_stdout(&o)["reports"][0];
    let radii = &r["routed"][0]["radii"];
    let ratio = radii[1].as_f64().unwrap() / radii[0].as_f64().unwrap();
    assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
    assert!(stderr(&o).contains("expected 2"));
}

#[test]
fn generic_scan_exit_code_tracks_apex_mass() {
    let o = run(&[
        "apex-scan",
        "--kind",
        "euclidean",
        "--base",
        "circle:32",
        "--cells",
        "12",
        "--trials",
        "3",
        "--seed",
        "5",
    ]);
    let mass = json_stdout(&o)["apex_mass"].as_f64().unwrap();
    assert_eq!(code(&o), if mass == 0.0 { 0 } else { 1 });
}

#[test]
fn apex_scan_needs_both_measures() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, "{\"mass\": [1.0]}").unwrap();
    let o = run(&[
        "apex-scan",
        "--kind",
        "euclidean",
        "--base",
        "circle:8",
        "--cells",
        "4",
        "--mu0",
        m.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn spectral_exit_codes() {
    let base = [
        "spectral",
        "--kind",
        "spherical",
        "--base",
        "circle:32",
        "--cells",
        "16",
    ];
    let o = run(&base);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let gap = json_stdout(&o)["report"]["gap"].as_f64().unwrap();
    assert!((gap - 2.0).abs() < 0.3, "{gap}");

    let mut a = base.to_vec();
    a.extend(["--n", "3"]);
    assert_eq!(code(&run(&a)), 1);

    let mut a = base.to_vec();
    a.extend(["--bandwidth", "1e-9"]);
    assert_eq!(code(&run(&a)), 2);
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    std::fs::write(&good, "0,1,2\n1,0,1\n2,1,0\n").unwrap();
    assert_eq!(
        code(&run(&["validate", "--csv", good.to_str().unwrap()])),
        0
    );
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "0,1,5\n1,0,1\n5,1,0\n").unwrap();
    let o = run(&["validate", "--csv", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json_stdout(&o)["valid"].as_bool(), Some(false));
    let junk = dir.path().join("junk.csv");
    std::fs::write(&junk, "0,x\n1,0\n").unwrap();
    assert_eq!(
        code(&run(&["validate", "--csv", junk.to_str().unwrap()])),
        2
    );
}

#[test]
fn wasserstein_between_grid_presets() {
    let o = run(&[
        "wasserstein",
        "--kind",
        "euclidean",
        "--base",
        "circle:16",
        "--cells",
        "6",
        "--preset",
        "antipodal-dirac",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json_stdout(&o);
    assert!(v["monotonicity"]["monotone"].as_bool().unwrap());
    assert!(v["distance"].as_f64().unwrap() > 1.5);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"K": [0.0], "N": [2.0], "t": [0.5], "theta": [1.0]}"#,
    )
    .unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "coeffs", "--N", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json_stdout(&o);
    assert_eq!(v["config"]["N"], serde_json::json!([3.0]));
    assert_eq!(v["config"]["K"], serde_json::json!([0.0]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["tau"].as_f64(), Some(0.5));

    std::fs::write(&cfg, "[1, 2]").unwrap();
    assert_eq!(
        code(&run(&["--config", cfg.to_str().unwrap(), "coeffs"])),
        2
    );
}

#[test]
fn reruns_are_byte_identical() {
    let outs: Vec<Vec<u8>> = ["1", "0"]
        .iter()
        .map(|jobs| {
            let o = run(&[
                "--jobs",
                jobs,
                "cd-check",
                "--kind",
                "spherical",
                "--base",
                "circle:24",
                "--cells",
                "12",
                "--K",
                "1",
                "--N",
                "2",
                "--trials",
                "3",
                "--seed",
                "4",
            ]);
            assert!(code(&o) <= 1, "{}", stderr(&o));
            o.stdout
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    let v: Value = serde_json::from_slice(&outs[0]).unwrap();
    assert_eq!(v["config"]["seed"], 4);
}
