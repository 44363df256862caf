use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use changuard::contract::Fingerprint;
use changuard::expcli::RunArtifact;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_changuard"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read(p: &Path) -> String {
    fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn budget_reports_deployed_numbers() {
    let o = run(&["budget"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], 13680);
    assert_eq!(v["per_observable"], 2280);
    let o = run(&["budget", "--mode", "precomputed"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total"], 3420);
}

#[test]
fn negative_margin_is_a_usage_error() {
    let o = run(&["budget", "--frame-bound", "3.73"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("margin"));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(code(&run(&["nonsense"])), 1);
    assert_eq!(code(&run(&["fingerprint", "--family", "tier9"])), 1);
    assert_eq!(code(&run(&["fingerprint", "--noise-lambda", "1.5"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn verify_exit_codes() {
    let honest = run(&["verify", "--channel", "honest", "--seed", "3"]);
    assert_eq!(code(&honest), 0, "{}", String::from_utf8_lossy(&honest.stderr));
    let sneaky = run(&["verify", "--channel", "sneaky", "--seed", "3", "--rounds", "40"]);
    assert_eq!(code(&sneaky), 2);
    let v: serde_json::Value = serde_json::from_slice(&sneaky.stdout).unwrap();
    assert_eq!(v["verdict"], "halt");
    let weak = run(&["verify", "--channel", "sneaky", "--family", "weak", "--exact", "--rounds", "10"]);
    assert_eq!(code(&weak), 0);
}

#[test]
fn fingerprint_then_calibrate_then_verify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut paths = Vec::new();
    for (i, alpha) in ["0,0", "0.05,0", "0,0.04"].iter().enumerate() {
        let out = dir.path().join(format!("t{i}"));
        let o = run(&[
            "fingerprint",
            "--exact",
            "--channel",
            "drift",
            "--drift-alpha",
            alpha,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let p = out.join("fingerprint.json");
        Fingerprint::from_json(&read(&p)).unwrap();
        paths.push(p);
    }
    let mut args = vec!["calibrate"];
    args.extend(paths.iter().map(|p| p.to_str().unwrap()));
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["empty"], false);
    assert!(v["d_typ"].as_f64().unwrap() > 0.0);

    let o = run(&[
        "verify",
        "--reference",
        paths[0].to_str().unwrap(),
        "--exact",
        "--channel",
        "sneaky",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn framebound_json() {
    let o = run(&["framebound", "--family", "complete", "--restarts", "20", "--iters", "200"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = v["c_estimate"].as_f64().unwrap();
    assert!((c - 3f64.sqrt()).abs() < 1e-2, "{c}");
    assert_eq!(v["restarts_used"], 20);
}

#[test]
fn detection_experiment_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["experiment", "detection", "--seed", "5", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&dir.path().join("table_deviations.csv"));
    assert!(csv.starts_with("observable,dev_honest_vs_sneaky,within_tolerance\n"));
    assert_eq!(csv.lines().count(), 8);
    let a = RunArtifact::from_json(&read(&dir.path().join("run.json"))).unwrap();
    assert_eq!(a.backend, "simulator");
    assert_eq!(a.schema_version, 1);
    assert!(a.spec_hashes.contains_key("complete"));
}

#[test]
fn experiment_runs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&["experiment", "drift", "--seed", "9", "--out", d.path().to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let load = |d: &tempfile::TempDir| {
        RunArtifact::from_json(&read(&d.path().join("run.json")))
            .unwrap()
            .reproducible_json()
            .unwrap()
    };
    assert_eq!(load(&a), load(&b));
    assert_eq!(
        read(&a.path().join("table_drift.csv")),
        read(&b.path().join("table_drift.csv"))
    );
}

#[test]
fn config_file_drives_sample_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"seed": 4, "trials": 20, "budget_divisors": [1, 100]}"#).unwrap();
    let out = dir.path().join("out");
    let o = run(&[
        "experiment",
        "sample",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = read(&out.join("table_rates.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("budget,n_O,TPR,FPR"));
    assert!(lines.next().unwrap().starts_with("13680,2280,"));
    assert!(lines.next().unwrap().starts_with("136,22,"));

    fs::write(&cfg, r#"{"trials": 20}"#).unwrap();
    let o = run(&["experiment", "sample", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "missing seed must be rejected");
    let o = run(&["experiment", "sample", "--trials", "5"]);
    assert_eq!(code(&o), 1);
}
