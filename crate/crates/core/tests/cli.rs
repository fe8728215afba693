//! End-to-end tests of the `lsclaw` binary against the checked-in
//! experiment configs.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lsclaw"))
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn checks_config_passes_and_writes_csv() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["checks", "--config"])
        .arg(config_dir().join("burgers_checks.json"))
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.path().join("checks.csv")).unwrap();
    assert!(text.starts_with("check,param,t,lhs,rhs,margin,pass\n"));
    assert!(!text.contains(",false\n"), "a check row failed:\n{text}");
}

#[test]
fn compare_config_reports_both_methods() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["compare", "--config"])
        .arg(config_dir().join("advection_compare.json"))
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.path().join("compare.csv")).unwrap();
    assert!(text.contains("tc,"));
    assert!(text.contains("godunov,"));
}

#[test]
fn convergence_config_runs_threaded() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["convergence", "--config"])
        .arg(config_dir().join("burgers_shock_convergence.json"))
        .arg("--out")
        .arg(out.path())
        .args(["--threads", "3"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(out.path().join("errors.csv")).unwrap();
    let errs: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(errs.len(), 3);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn run_config_writes_snapshots_and_diag() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["run", "--config"])
        .arg(config_dir().join("burgers_shock_run.json"))
        .arg("--out")
        .arg(out.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.path().join("y_000000.snap").exists());
    assert!(out.path().join("u_final.snap").exists());
    let diag = std::fs::read_to_string(out.path().join("diag.csv")).unwrap();
    assert!(diag.starts_with("step,t,l1,l2,min,max,tv_x,entropy_residual\n"));
    assert!(diag.lines().count() > 2);
}

#[test]
fn missing_config_fails_with_nonzero_exit() {
    let out = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["run", "--config", "/nonexistent.json", "--out"])
        .arg(out.path())
        .status()
        .unwrap();
    assert!(!status.success());
}
