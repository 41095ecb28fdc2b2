use std::f64::consts::{PI, TAU};
use std::process::{Command, Output};

use serde_json::Value;

fn riemann(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riemann"))
        .args(args)
        .env("RIEMANN_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = riemann(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON artifact")
}

/// `φ(x/(2π))` summed naively in `f64` over `k ≤ n`.
fn naive_phi(x: f64, n: u64) -> (f64, f64) {
    let (mut re, mut im) = (0.0, x / TAU);
    for k in 1..=n {
        let k2 = (k * k) as f64;
        let a = -TAU * (x * k2).fract();
        re += (1.0 - a.cos()) / (2.0 * PI * PI * k2);
        im += -a.sin() / (2.0 * PI * PI * k2);
    }
    (re, im)
}

#[test]
fn phi_vanishes_at_zero() {
    let v = json(&["eval", "--t", "0", "--tol", "1e-12"]);
    assert_eq!(v["result"]["re"], 0.0);
    assert_eq!(v["result"]["im"], 0.0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["command"]["subcommand"], "eval");
}

#[test]
fn eval_agrees_with_a_naive_sum() {
    let v = json(&["eval", "--x", "0.3", "--tol", "1e-6"]);
    let (re, im) = naive_phi(0.3, 200_000);
    let tol = 1e-6 + 1.0 / (PI * PI * 200_000.0);
    assert!((v["result"]["re"].as_f64().unwrap() - re).abs() <= tol);
    assert!((v["result"]["im"].as_f64().unwrap() - im).abs() <= tol);
}

#[test]
fn trace_closes_up_to_the_period_shift() {
    let v = json(&["trace", "--n", "11", "--tol", "1e-8"]);
    let d = &v["result"]["endpoint_difference"];
    assert!(d["re"].as_f64().unwrap().abs() <= 2e-8);
    assert!((d["im"].as_f64().unwrap() - 1.0 / TAU).abs() <= 2e-8);
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 11);
}

#[test]
fn corner_ratio_at_one_third_is_i() {
    let v = json(&["corner", "--p", "1", "--q", "3", "--h-min", "1e-6"]);
    assert!(v["result"]["ratio_distance_to_i"].as_f64().unwrap() < 1e-2);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["bogus"][..],
        &["eval", "--t", "0.1", "--tol", "-1"],
        &["corner", "--p", "1", "--q", "2"],
        &["farey", "--q-max", "1", "--q-min", "3"],
    ] {
        let out = riemann(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn infeasible_tolerance_exits_with_three() {
    let out = riemann(&["eval", "--t", "0.1", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(riemann(&["--help"]).status.code(), Some(0));
    assert_eq!(riemann(&["--version"]).status.code(), Some(0));
}

#[test]
fn dry_run_prints_the_resolved_config() {
    let v = json(&["cone-scan", "--dry-run", "--seed", "7"]);
    assert_eq!(v["command"]["subcommand"], "cone-scan");
    assert_eq!(v["command"]["directions"], 16);
    assert_eq!(v["seed"], 7);
    assert!(v.get("result").is_none());
}

#[test]
fn csv_artifacts_carry_version_and_config() {
    let out = riemann(&["cf", "--value", "golden", "--depth", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), format!("# riemann {}", env!("CARGO_PKG_VERSION")));
    assert!(lines.next().unwrap().starts_with("# config {"));
    assert!(!text.contains('\r'));
    // header and five convergents
    assert_eq!(lines.count(), 6);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["lemma-c", "--q-max", "5", "--h-per-q", "4", "--format", "csv"];
    assert_eq!(riemann(&args).stdout, riemann(&args).stdout);
    let args = ["cover", "--q0", "3", "--qmax", "30", "--verify", "5", "--seed", "11"];
    assert_eq!(riemann(&args).stdout, riemann(&args).stdout);
}

#[test]
fn replay_reproduces_an_artifact() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let path = dir.path().join(format!("farey.{format}"));
        let path = path.to_str().unwrap();
        let out = riemann(&["farey", "--q-max", "7", "--format", format, "--output", path]);
        assert!(out.status.success() && out.stdout.is_empty());
        let first = std::fs::read(path).unwrap();
        std::fs::remove_file(path).unwrap();
        assert!(riemann(&["replay", path]).status.code() != Some(0));
        std::fs::write(dir.path().join("copy"), &first).unwrap();
        let out = riemann(&["replay", dir.path().join("copy").to_str().unwrap()]);
        assert!(out.status.success());
        assert_eq!(std::fs::read(path).unwrap(), first);
    }
}
