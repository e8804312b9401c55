use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mehc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mehc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = mehc(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn mean_rewards(path: &Path) -> Vec<Vec<f64>> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    serde_json::from_value(v["mean_reward"].clone()).unwrap()
}

#[test]
fn toy_round_trip_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let toy = dir.path().join("toy.json");
    assert!(mehc(&["gen", "toy", "--alpha", "0.11", "--beta", "0.1", "--eps", "0.05", "-o", p(&toy)]).status.success());
    let report = ok_json(&["analyze", p(&toy)]);
    assert_eq!(report["mehc"].as_f64(), Some(2.2));
    assert_eq!(report["diameter"].as_f64(), Some(20.0));
    assert_eq!(report["optimal_gain"].as_f64(), Some(0.9));
    assert_eq!(report["bias_span"].as_f64(), Some(0.2));
}

#[test]
fn zero_potential_keeps_rewards() {
    let dir = tempfile::tempdir().unwrap();
    let toy = dir.path().join("toy.json");
    let phi = dir.path().join("phi.json");
    let shaped = dir.path().join("shaped.json");
    assert!(mehc(&["gen", "toy", "-o", p(&toy)]).status.success());
    std::fs::write(&phi, r#"{"phi": [0, 0]}"#).unwrap();
    assert!(mehc(&["shape", p(&toy), "--potential", p(&phi), "-o", p(&shaped)]).status.success());
    assert_eq!(mean_rewards(&toy), mean_rewards(&shaped));
}

#[test]
fn shaping_twice_with_opposite_potentials_restores_rewards() {
    let dir = tempfile::tempdir().unwrap();
    let toy = dir.path().join("toy.json");
    let phi = dir.path().join("phi.json");
    let neg = dir.path().join("neg.json");
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    assert!(mehc(&["gen", "toy", "-o", p(&toy)]).status.success());
    std::fs::write(&phi, r#"{"phi": [0, 0.1]}"#).unwrap();
    std::fs::write(&neg, r#"{"phi": [0, -0.1]}"#).unwrap();
    assert!(mehc(&["shape", p(&toy), "--potential", p(&phi), "-o", p(&once)]).status.success());
    assert!(mehc(&["shape", p(&once), "--potential", p(&neg), "-o", p(&twice)]).status.success());
    let once = mean_rewards(&once);
    assert!((once[0][1] - 0.895).abs() < 1e-12);
    for (a, b) in mean_rewards(&toy).iter().flatten().zip(mean_rewards(&twice).iter().flatten()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn oracle_agrees_on_random_mdp() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("r.json");
    assert!(mehc(&["gen", "random", "--states", "4", "--actions", "2", "--seed", "11", "-o", p(&m)]).status.success());
    let out = ok_json(&["oracle", p(&m)]);
    assert!(out["max_abs_difference"].as_f64().unwrap() <= 1e-6);
    assert_eq!(out["hitting_cost"]["solver"].as_array().unwrap().len(), 4);
}

#[test]
fn learn_writes_traces_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let toy = dir.path().join("toy.json");
    let runs = dir.path().join("runs");
    assert!(mehc(&["gen", "toy", "-o", p(&toy)]).status.success());
    let summary = ok_json(&["learn", p(&toy), "--T", "500", "--delta", "0.05", "--seeds", "0,1..3", "--out", p(&runs), "--thin", "10"]);
    assert_eq!(summary["seeds"], serde_json::json!([0, 1, 2]));
    assert_eq!(summary["T"], 500);
    for seed in 0..3 {
        let csv = std::fs::read_to_string(runs.join(format!("seed_{seed}.csv"))).unwrap();
        assert_eq!(csv.lines().next(), Some("t,cumulative_reward,regret,episode"));
        assert!(csv.lines().last().unwrap().starts_with("500,"));
    }
    let on_disk: Value = serde_json::from_str(&std::fs::read_to_string(runs.join("summary.json")).unwrap()).unwrap();
    assert_eq!(on_disk, summary);
}

#[test]
fn sweep_prints_summary() {
    let out = ok_json(&["sweep-theorem3", "--num", "10", "--states", "3", "--actions", "2", "--seed", "5"]);
    assert_eq!(out["instances"], 10);
    assert_eq!(out["violations"], 0);
}

#[test]
fn domain_errors_exit_one_with_name() {
    let dir = tempfile::tempdir().unwrap();
    let toy = dir.path().join("toy.json");
    let phi = dir.path().join("phi.json");
    assert!(mehc(&["gen", "toy", "-o", p(&toy)]).status.success());
    std::fs::write(&phi, r#"{"phi": [0, 5]}"#).unwrap();
    let out = mehc(&["shape", p(&toy), "--potential", p(&phi), "-o", p(&dir.path().join("x.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ShapingOutOfBounds"));

    let out = mehc(&["gen", "toy", "--alpha", "0.1", "--beta", "0.2", "-o", p(&toy)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidParameters"));
}

#[test]
fn usage_errors_exit_two() {
    let out = mehc(&["analyze", "--bogus", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));
    assert_eq!(mehc(&["learn", "m.json", "--T", "10", "--seeds", "x", "--out", "o"]).status.code(), Some(2));
    assert_eq!(mehc(&[]).status.code(), Some(2));
}
