//! End-to-end checks of the binary: config loading, overrides, report and
//! campaign files, byte-level reproducibility, exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qlan")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qlan-cli-test-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &Path, name: &str, body: serde_json::Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&body).unwrap()).unwrap();
    path
}

fn gaussian_config(dir: &Path, out: &Path) -> PathBuf {
    write_config(
        dir,
        "gaussian.json",
        serde_json::json!({
            "experiment": "gaussian-risk",
            "d": 2, "r": 2, "mu": [0.75, 0.25],
            "n": 1, "reps": 50000, "seed": 7,
            "out": out,
        }),
    )
}

fn load_report(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn run_produces_report_and_campaign_row() {
    let dir = scratch_dir("report");
    let out = dir.join("report.json");
    let cfg = gaussian_config(&dir, &out);
    let status = Command::new(bin())
        .args(["gaussian-risk", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert!(status.success());
    let report = load_report(&out);
    assert_eq!(report["experiment"], "gaussian-risk");
    assert!((report["theory"].as_f64().unwrap() - 1.875).abs() < 1e-12);
    assert!(report["mc_estimate"].as_f64().is_some());
    let campaign = std::fs::read_to_string(dir.join("campaign.csv")).unwrap();
    let mut lines = campaign.lines();
    assert_eq!(
        lines.next().unwrap(),
        "experiment,d,r,n,reps,seed,mc_estimate,mc_stderr,theory,elapsed_ms"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("gaussian-risk,2,2,1,50000,7,"));

    // a second run appends a second row without repeating the header
    let status = Command::new(bin())
        .args(["gaussian-risk", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert!(status.success());
    let campaign = std::fs::read_to_string(dir.join("campaign.csv")).unwrap();
    assert_eq!(campaign.lines().count(), 3);
}

#[test]
fn reports_are_bit_reproducible_modulo_elapsed() {
    let dir = scratch_dir("determinism");
    let out1 = dir.join("r1.json");
    let out2 = dir.join("r2.json");
    let cfg = gaussian_config(&dir, &out1);
    assert!(Command::new(bin())
        .args(["gaussian-risk", "--config"])
        .arg(&cfg)
        .status()
        .unwrap()
        .success());
    assert!(Command::new(bin())
        .args(["gaussian-risk", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(&out2)
        .status()
        .unwrap()
        .success());
    let mut a = load_report(&out1);
    let mut b = load_report(&out2);
    // wall-clock time and the echoed output path are the only fields allowed
    // to differ
    for r in [&mut a, &mut b] {
        r["elapsed_ms"] = 0.into();
        r["config"]["out"] = serde_json::Value::Null;
    }
    assert_eq!(a, b);
}

#[test]
fn seed_and_reps_overrides_apply() {
    let dir = scratch_dir("overrides");
    let out = dir.join("r.json");
    let cfg = gaussian_config(&dir, &out);
    assert!(Command::new(bin())
        .args(["gaussian-risk", "--config"])
        .arg(&cfg)
        .args(["--seed", "99", "--reps", "1234"])
        .status()
        .unwrap()
        .success());
    let report = load_report(&out);
    assert_eq!(report["seed"], 99);
    assert_eq!(report["reps"], 1234);
    assert_eq!(report["config"]["seed"], 99);
}

#[test]
fn wrong_subcommand_for_config_is_rejected() {
    let dir = scratch_dir("mismatch");
    let out = dir.join("r.json");
    let cfg = gaussian_config(&dir, &out);
    let output = Command::new(bin())
        .args(["two-stage", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("gaussian-risk"), "{stderr}");
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = scratch_dir("unknown");
    let cfg = write_config(
        &dir,
        "bad.json",
        serde_json::json!({
            "experiment": "gaussian-risk",
            "d": 2, "r": 2, "mu": [0.75, 0.25],
            "n": 1, "reps": 10, "seed": 7,
            "grid": true
        }),
    );
    let output = Command::new(bin())
        .args(["gaussian-risk", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn schurweyl_verify_passes_and_exits_zero() {
    let dir = scratch_dir("verify");
    let out = dir.join("verify.json");
    let cfg = write_config(
        &dir,
        "verify.json.cfg",
        serde_json::json!({
            "experiment": "schurweyl-verify",
            "d": 2, "r": 2, "mu": [0.7, 0.3],
            "n": 1, "reps": 1, "n_max": 4, "seed": 7,
            "out": out,
        }),
    );
    let status = Command::new(bin())
        .args(["schurweyl-verify", "--config"])
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report = load_report(&out);
    assert_eq!(report["mc_estimate"], 0.0);
    assert!(report["extra"]["records"].as_array().unwrap().len() > 10);
}
