use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlburgers"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.trim()).unwrap_or_else(|_| panic!("stderr is not JSON: {text}"))
}

#[test]
fn solve_writes_profile_meta_and_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["solve", "--kernel", "exp:k=1", "--u-minus", "1", "--u-plus", "-1", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let meta = json(&tmp.path().join("o/profile.meta.json"));
    assert_eq!(meta["status"], "converged");
    assert_eq!(meta["u_c"], 1.0);
    assert_eq!(meta["s"], 0.0);
    assert!(meta["config"]["length"].as_f64().unwrap() > 0.0);
    assert!(meta["residuals"]["pointwise"].as_f64().unwrap() < 1e-3);
    let profile = fs::read_to_string(tmp.path().join("o/profile.csv")).unwrap();
    assert!(profile.starts_with("x,U\n"));
    assert_eq!(profile.lines().count(), 2 * 4096 + 2);
    let trace = fs::read_to_string(tmp.path().join("o/trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), meta["iterations"].as_u64().unwrap() as usize + 1);
}

#[test]
fn solve_rejects_equal_states() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["solve", "--kernel", "exp:k=1", "--u-minus", "1", "--u-plus", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "invalid_params");
    assert!(err["message"].as_str().unwrap().contains("u_minus must exceed u_plus"));
}

#[test]
fn max_iterations_exit_indeterminate() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        tmp.path(),
        &["solve", "--u-minus", "0.5", "--u-plus", "0", "--cells", "256", "--max-iter", "3"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&tmp.path().join("out/profile.meta.json"))["status"], "max_iterations");
}

#[test]
fn config_file_and_flags_give_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    let flags = ["solve", "--kernel", "gauss:sigma=1", "--u-minus", "2", "--u-plus", "0.5", "--cells", "1024", "--out", "o"];
    assert_eq!(run(tmp.path(), &flags).status.code(), Some(0));
    let names = ["profile.csv", "profile.meta.json", "trace.csv"];
    let first: Vec<Vec<u8>> = names.iter().map(|n| fs::read(tmp.path().join("o").join(n)).unwrap()).collect();
    fs::remove_dir_all(tmp.path().join("o")).unwrap();
    fs::write(
        tmp.path().join("run.json"),
        r#"{"kernel": "gauss:sigma=1", "u_minus": 2, "u_plus": 0.5, "cells": 1024, "output": "o"}"#,
    )
    .unwrap();
    assert_eq!(run(tmp.path(), &["solve", "--config", "run.json"]).status.code(), Some(0));
    for (n, bytes) in names.iter().zip(&first) {
        assert_eq!(&fs::read(tmp.path().join("o").join(n)).unwrap(), bytes, "{n} differs");
    }
}

#[test]
fn classify_reports_both_regimes() {
    let tmp = tempfile::tempdir().unwrap();
    for (u, predicted, measured) in [("2.5", true, "discontinuous"), ("0.6", false, "continuous")] {
        let minus_u = format!("-{u}");
        let out = run(
            tmp.path(),
            &["classify", "--kernel", "exp:k=1", "--u-minus", u, "--u-plus", &minus_u, "--base-cells", "512"],
        );
        assert_eq!(out.status.code(), Some(0));
        let c = json(&tmp.path().join("out/classification.json"));
        assert_eq!(c["predicted_by_theorem"], predicted);
        assert_eq!(c["measured"], measured);
        assert_eq!(c["jumps"].as_array().unwrap().len(), 3);
        assert_eq!(c["ratios"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn sweep_rows_follow_the_criterion_and_repeat_exactly() {
    let tmp = tempfile::tempdir().unwrap();
    let args = ["sweep", "--kernels", "exp:k=0.5,exp:k=1,exp:k=2", "--base-cells", "256", "--out", "a"];
    assert_eq!(run(tmp.path(), &args).status.code(), Some(0));
    let text = fs::read_to_string(tmp.path().join("a/sweep.csv")).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        rows += 1;
        assert_eq!(&rec[6], "ok");
        let amplitude: f64 = rec[1].parse().unwrap();
        let threshold: f64 = rec[4].parse().unwrap();
        if amplitude > 1.1 * threshold {
            assert_ne!(&rec[7], "continuous", "{}", &rec[0]);
        }
    }
    assert_eq!(rows, 60);
    let mut again = args;
    again[6] = "b";
    assert_eq!(run(tmp.path(), &again).status.code(), Some(0));
    assert_eq!(text, fs::read_to_string(tmp.path().join("b/sweep.csv")).unwrap());
}

#[test]
fn empty_sweep_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("c.json"), r#"{"sweep": {"amplitudes": [], "log_amplitudes": null}}"#).unwrap();
    let out = run(tmp.path(), &["sweep", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "config");
}

#[test]
fn simulate_constant_and_steepening() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["simulate", "--init", "constant:c=0.3", "--cells", "400", "--out", "c"]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(tmp.path().join("c/snapshots.csv")).unwrap();
    for line in text.lines().skip(1) {
        let u: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((u - 0.3).abs() < 1e-12);
    }
    let out = run(tmp.path(), &["simulate", "--out", "t"]);
    assert_eq!(out.status.code(), Some(0));
    let d = json(&tmp.path().join("t/diagnostics.json"));
    assert!(d["slope_growth"].as_f64().unwrap() >= 3.0);
    assert!(d["L1_error_vs_translate"].is_null());
}

#[test]
fn simulate_from_profile_checks_the_domain() {
    let tmp = tempfile::tempdir().unwrap();
    let solve = ["solve", "--u-minus", "2.5", "--u-plus", "0", "--length", "60", "--cells", "2048"];
    assert_eq!(run(tmp.path(), &solve).status.code(), Some(0));
    let out = run(tmp.path(), &["simulate", "--init-from", "out/profile.csv", "--cells", "1000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let d = json(&tmp.path().join("out/diagnostics.json"));
    let speed = d["measured_speed"].as_f64().unwrap();
    assert!((speed - 1.25).abs() < 0.02 * 1.25, "speed {speed}");
    assert!(d["L1_error_vs_translate"].as_f64().unwrap() < 0.2);
    let out = run(
        tmp.path(),
        &["simulate", "--init-from", "out/profile.csv", "--start", "-80", "--end", "80"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "config");
}

#[test]
fn kernel_validate_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["kernel-validate", "--kernel", "tri:a=2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v, json(&tmp.path().join("out/validation.json")));

    let mut table = String::from("y,K\n");
    for i in 0..=40 {
        let y = -2.0 + 0.1 * i as f64;
        table.push_str(&format!("{y},{}\n", y * y * (2.0 - y.abs())));
    }
    fs::write(tmp.path().join("k.csv"), table).unwrap();
    let out = run(tmp.path(), &["kernel-validate", "--kernel", "table:k.csv"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&tmp.path().join("out/validation.json"));
    assert_eq!(v["passed"], false);
}

#[test]
fn usage_errors_are_json() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["solve", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "usage");
    let out = run(tmp.path(), &["solve", "--kernel", "cauchy:k=1", "--u-minus", "1", "--u-plus", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_json(&out)["message"].is_string());
    assert_eq!(run(tmp.path(), &["--help"]).status.code(), Some(0));
}
