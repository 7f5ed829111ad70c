use std::path::Path;
use std::process::{Command, Output};

use sr2d::harness::TrialRecord;
use sr2d::io::{read_grid, read_json, DetectionFile, RecoveryFile};
use sr2d::report::read_csv;
use tempfile::TempDir;

fn sr2d(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sr2d")).args(args).current_dir(dir).output().expect("binary runs")
}

fn write_config(dir: &Path, noise: f64) {
    let body = format!(
        r#"{{
  "omega": 10,
  "sources": [
    {{"location": [0.2, 0.3], "amplitude": {{"re": 1.0, "im": 0.0}}}},
    {{"location": [1.0, 0.9], "amplitude": {{"re": 0.0, "im": 1.5}}}}
  ],
  "noise_level": {noise},
  "seed": 4
}}"#
    );
    std::fs::write(dir.join("sources.json"), body).unwrap();
}

#[test]
fn simulate_detect_recover_round_trip() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    write_config(dir, 1e-9);
    let out = sr2d(&["simulate", "--config", "sources.json", "--out", "grid.json"], dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let grid = read_grid(&dir.join("grid.json")).unwrap();
    assert_eq!(grid.cutoff(), 10);
    assert_eq!(grid.noise_level(), 1e-9);

    let out = sr2d(&["detect", "--grid", "grid.json", "--out", "det.json"], dir);
    assert!(out.status.success());
    let det: DetectionFile = read_json(&dir.join("det.json")).unwrap();
    assert_eq!(det.count, 2);

    let out = sr2d(&["detect", "--grid", "grid.json", "--s", "3"], dir);
    assert!(out.status.success());
    let fixed: DetectionFile = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(fixed.visited.len(), 1);
    assert_eq!(fixed.visited[0].s, 3);

    let out = sr2d(&["recover", "--grid", "grid.json", "--n", "2", "--amplitudes", "--out", "rec.json"], dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rec: RecoveryFile = read_json(&dir.join("rec.json")).unwrap();
    for truth in [[0.2, 0.3], [1.0, 0.9]] {
        let e = rec
            .locations
            .iter()
            .map(|p| (p[0] - truth[0]).abs() + (p[1] - truth[1]).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(e < 0.02, "{truth:?}: {:?}", rec.locations);
    }
    assert_eq!(rec.amplitudes.unwrap().len(), 2);
}

#[test]
fn simulation_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    write_config(dir, 0.01);
    assert!(sr2d(&["simulate", "--config", "sources.json", "--out", "a.json"], dir).status.success());
    assert!(sr2d(&["simulate", "--config", "sources.json", "--out", "b.json"], dir).status.success());
    assert_eq!(std::fs::read(dir.join("a.json")).unwrap(), std::fs::read(dir.join("b.json")).unwrap());
}

#[test]
fn bad_input_exits_with_code_two() {
    let tmp = TempDir::new().unwrap();
    let out = sr2d(&["detect", "--grid", "missing.json"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(tmp.path().join("bad.json"), r#"{"cutoff": 3, "noise_level": 0, "values": []}"#).unwrap();
    assert_eq!(sr2d(&["recover", "--grid", "bad.json", "--n", "1"], tmp.path()).status.code(), Some(2));
}

#[test]
fn phase_transition_writes_csv_and_svg() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let out = sr2d(
        &["phase-transition", "--mode", "number", "--n", "2", "--trials", "300", "--seed", "3", "--out-csv", "p.csv", "--out-plot", "p.svg"],
        dir,
    );
    assert!(out.status.code() == Some(0) || out.status.code() == Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let records: Vec<TrialRecord> = read_csv(&dir.join("p.csv")).unwrap();
    assert!(records.len() >= 290);
    let header = std::fs::read_to_string(dir.join("p.csv")).unwrap();
    assert!(header.starts_with("trial_id,n_true,d_min,sigma,srf,snr,n_detected,success,max_location_error,seed"));
    let svg = std::fs::read_to_string(dir.join("p.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).expect("well-formed SVG");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
    assert_eq!(circles, records.len());
}

#[test]
fn verify_theory_small_suite() {
    let tmp = TempDir::new().unwrap();
    let out = sr2d(&["verify-theory", "--suite", "geometry", "--instances", "200", "--out-csv", "v.csv"], tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = std::fs::read_to_string(tmp.path().join("v.csv")).unwrap();
    assert_eq!(text.lines().count(), 401);
}
