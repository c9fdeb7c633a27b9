//! End-to-end CLI behavior: flags, formats, exit codes, reproducibility.

use std::process::{Command, Output};

fn shufflelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shufflelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn sample_emits_valid_permutations() {
    let out = shufflelab(&[
        "sample", "--model", "riffle", "--n", "7", "--a", "2", "--samples", "1", "--seed", "1",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let line = String::from_utf8(out.stdout).unwrap();
    let mut values: Vec<u32> = line.split_whitespace().map(|v| v.parse().unwrap()).collect();
    values.sort_unstable();
    assert_eq!(values, (1..=7).collect::<Vec<u32>>());
}

#[test]
fn sample_json_shape() {
    let out = shufflelab(&[
        "sample", "--model", "top-m", "--n", "5", "--m", "2", "--samples", "3", "--seed", "9",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "sample");
    assert_eq!(v["permutations"].as_array().unwrap().len(), 3);
}

#[test]
fn invalid_pile_count_is_exit_2() {
    let out = shufflelab(&[
        "sample", "--model", "riffle", "--n", "7", "--a", "0", "--samples", "1", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("a must be >= 1"), "stderr: {err}");
}

#[test]
fn biased_probabilities_are_accepted() {
    let out = shufflelab(&[
        "sample", "--model", "riffle", "--n", "6", "--a", "2", "--p", "1/3,2/3", "--samples", "2",
        "--seed", "3", "--format", "csv",
    ]);
    assert!(out.status.success());
    // mismatched length is rejected
    let out = shufflelab(&[
        "sample", "--model", "riffle", "--n", "6", "--a", "3", "--p", "1/3,2/3", "--samples", "1",
        "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exact_riffle_inversions() {
    let out = shufflelab(&["exact", "--model", "riffle", "--n", "2", "--a", "2", "--stat", "inv"]);
    let v = stdout_json(&out);
    assert_eq!(v["distribution"]["0"], "3/4");
    assert_eq!(v["distribution"]["1"], "1/4");
}

#[test]
fn exact_uniform_descents() {
    let out = shufflelab(&["exact", "--model", "uniform", "--n", "3", "--stat", "des"]);
    let v = stdout_json(&out);
    assert_eq!(v["distribution"]["0"], "1/6");
    assert_eq!(v["distribution"]["1"], "2/3");
    assert_eq!(v["distribution"]["2"], "1/6");
}

#[test]
fn exact_oracle_routes_agree() {
    let base = stdout_json(&shufflelab(&[
        "exact", "--model", "riffle", "--n", "6", "--a", "3", "--stat", "inv",
    ]));
    let galois = stdout_json(&shufflelab(&[
        "exact", "--model", "riffle", "--n", "6", "--a", "3", "--stat", "inv", "--method", "galois",
    ]));
    assert_eq!(base["distribution"], galois["distribution"]);
    let words = stdout_json(&shufflelab(&[
        "exact", "--model", "riffle", "--n", "6", "--a", "3", "--stat", "des",
    ]));
    let dp = stdout_json(&shufflelab(&[
        "exact", "--model", "riffle", "--n", "6", "--a", "3", "--stat", "des", "--method", "dp",
    ]));
    assert_eq!(words["distribution"], dp["distribution"]);
}

#[test]
fn exact_budget_exhaustion_is_exit_3() {
    let out = shufflelab(&["exact", "--model", "uniform", "--n", "20", "--stat", "des"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("budget"), "stderr: {err}");
}

#[test]
fn budget_env_override_is_respected() {
    let out = Command::new(env!("CARGO_BIN_EXE_shufflelab"))
        .args(["exact", "--model", "uniform", "--n", "8", "--stat", "des"])
        .env("SHUFFLELAB_BUDGET", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exact_csv_lists_values_in_order() {
    let out = shufflelab(&[
        "exact", "--model", "riffle", "--n", "3", "--a", "2", "--stat", "inv", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "value,probability\n0,1/2\n1,1/4\n2,1/4\n");
}

#[test]
fn tvbound_value() {
    let v = stdout_json(&shufflelab(&["tvbound", "--n", "3", "--a", "3"]));
    assert_eq!(v["bound_exact"], "7/9");
    assert!((v["bound"].as_f64().unwrap() - 7.0 / 9.0).abs() < 1e-12);
    let out = shufflelab(&["tvbound", "--n", "5", "--a", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn moments_without_closed_form_is_exit_2() {
    let out = shufflelab(&["moments", "--model", "uniform", "--n", "9", "--stat", "inv"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&shufflelab(&[
        "moments", "--model", "word", "--n", "100", "--a", "3", "--stat", "la",
    ]));
    assert_eq!(v["exact"], false);
}

#[test]
fn verify_couplings_reports_zero_failures() {
    let v = stdout_json(&shufflelab(&[
        "verify-couplings", "--n", "60", "--a", "2", "--samples", "1000", "--seed", "7",
    ]));
    assert_eq!(v["failures"], 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn convolution_check_passes_and_exits_zero() {
    let v = stdout_json(&shufflelab(&[
        "convolution-check", "--n", "3", "--a", "2", "--b", "2", "--p", "1/3,2/3", "--p2", "1/4,3/4",
    ]));
    assert_eq!(v["perm_laws_equal"], true);
    assert_eq!(v["tv_inversions"], "0");
    assert_eq!(v["pass"], true);
}

#[test]
fn dominance_command_runs() {
    let v = stdout_json(&shufflelab(&["dominance", "--n", "4", "--a-list", "3,4"]));
    assert_eq!(v["pass"], true);
}

#[test]
fn failed_verdict_is_exit_4() {
    // a = 1 collapses the riffle to a point mass at the identity, whose
    // inversion CDF is 1 everywhere; the two-pile CDF cannot dominate it,
    // so the ordering claim genuinely fails and the exit code must say so
    let out = shufflelab(&["dominance", "--n", "3", "--a-list", "1"]);
    assert_eq!(out.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn mcdiarmid_command_runs() {
    let v = stdout_json(&shufflelab(&[
        "mcdiarmid", "--n", "25", "--samples", "20000", "--seed", "5",
    ]));
    assert_eq!(v["pass"], true);
}

#[test]
fn normality_command_reports_small_distance() {
    let v = stdout_json(&shufflelab(&[
        "normality", "--model", "riffle", "--n", "100", "--a", "2", "--stat", "inv", "--samples",
        "20000", "--seed", "11", "--workers", "2",
    ]));
    let d_k = v["d_k"].as_f64().unwrap();
    assert!(d_k < 0.05, "d_k = {d_k}");
    assert_eq!(v["standardization"], "exact-variance");
    // the projection-scale denominator is accepted for inversions
    let v = stdout_json(&shufflelab(&[
        "normality", "--model", "riffle", "--n", "100", "--a", "2", "--stat", "inv", "--samples",
        "20000", "--seed", "11", "--standardization", "projection",
    ]));
    assert_eq!(v["standardization"], "projection-scale");
}

fn strip_timing(mut v: serde_json::Value) -> serde_json::Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn reports_are_reproducible_across_worker_counts() {
    let run = |workers: &str| {
        stdout_json(&shufflelab(&[
            "normality", "--model", "uniform", "--n", "50", "--stat", "la", "--samples", "30000",
            "--seed", "42", "--workers", workers,
        ]))
    };
    assert_eq!(strip_timing(run("1")), strip_timing(run("4")));

    let rate = |workers: &str| {
        stdout_json(&shufflelab(&[
            "rate", "--stat", "des", "--a", "2", "--grid", "10,20,30", "--samples", "5000",
            "--seed", "4", "--workers", workers,
        ]))
    };
    assert_eq!(strip_timing(rate("1")), strip_timing(rate("3")));
}

#[test]
fn sample_runs_are_seed_reproducible() {
    let run = || {
        let out = shufflelab(&[
            "sample", "--model", "riffle-inverse", "--n", "12", "--a", "3", "--samples", "5",
            "--seed", "77", "--format", "csv",
        ]);
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn reports_round_trip_through_json() {
    for args in [
        vec!["tvbound", "--n", "3", "--a", "4"],
        vec!["moments", "--model", "riffle", "--n", "7", "--a", "2", "--stat", "inv"],
        vec!["exact", "--model", "top-m", "--n", "5", "--m", "2", "--stat", "des"],
    ] {
        let out = shufflelab(&args);
        let v = stdout_json(&out);
        let text = serde_json::to_string(&v).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v, "round trip failed for {args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("shufflelab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bound.json");
    let out = shufflelab(&["tvbound", "--n", "2", "--a", "4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["bound_exact"], "1/4");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn alpha_model_errors_cleanly() {
    let out = shufflelab(&[
        "sample", "--model", "alpha", "--n", "4", "--alpha", "0.6", "--samples", "1", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = shufflelab(&[
        "sample", "--model", "alpha", "--n", "10", "--alpha", "0.4", "--samples", "2", "--seed", "1",
        "--format", "csv",
    ]);
    assert!(out.status.success());
}

#[test]
fn convolution_model_sampling() {
    let out = shufflelab(&[
        "sample", "--model", "convolution", "--n", "6", "--conv", "a=2;p=1/3,2/3|a=2",
        "--samples", "4", "--seed", "8", "--format", "csv",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}
