//! End-to-end tests of the `persuasion` binary: flag parsing, config
//! precedence, document round trips, CSV schemas, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_persuasion"))
}

fn reference_flags(cmd: &mut Command) -> &mut Command {
    cmd.args([
        "--p", "0.3", "--c", "0.5", "--e", "0.1", "--mu-a", "0.8", "--mu-b", "0.6",
    ])
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_emits_the_reference_document() {
    let out = run_ok(reference_flags(bin().arg("solve")));
    let doc = stdout_json(&out);
    assert_eq!(doc["regime"], "reveal_a");
    assert_eq!(doc["policy"]["sigma_a"], 1.0);
    assert_eq!(doc["policy"]["sigma_b"], 0.892857142857);
    assert_eq!(doc["pm_payoff"], 0.62625);
    assert_eq!(doc["cutoffs"]["p_hat"], 0.2);
    assert_eq!(doc["warnings"].as_array().unwrap().len(), 0);
    // 12-significant-digit serialization is part of the contract
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"sigma_b\": 0.892857142857"));
}

#[test]
fn benchmark_pins_project_b_off() {
    let out = run_ok(reference_flags(bin().arg("benchmark")));
    let doc = stdout_json(&out);
    assert_eq!(doc["regime"], "benchmark_single");
    assert_eq!(doc["policy"]["sigma_b"], 0.0);
    assert_eq!(doc["pm_payoff"], 0.4125);
    assert!(doc.get("cutoffs").is_none());
}

#[test]
fn invalid_parameters_exit_one_with_the_violation() {
    let out = bin()
        .args([
            "solve", "--p", "0.6", "--c", "0.5", "--e", "0.1", "--mu-a", "0.8", "--mu-b", "0.6",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p < c violated"));
}

#[test]
fn missing_parameters_exit_one_naming_them() {
    let out = bin().args(["solve", "--p", "0.3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("missing model parameters"));
    assert!(stderr.contains("mu_a"));
}

#[test]
fn identical_inputs_emit_byte_identical_documents() {
    let a = run_ok(reference_flags(bin().arg("solve")));
    let b = run_ok(reference_flags(bin().arg("solve")));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn emitted_documents_round_trip_as_configs() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("solution.json");
    run_ok(reference_flags(bin().arg("solve")).args(["--output", first.to_str().unwrap()]));
    let second = dir.path().join("again.json");
    run_ok(bin().args([
        "solve",
        "--config",
        first.to_str().unwrap(),
        "--output",
        second.to_str().unwrap(),
    ]));
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap(),
        "re-ingested document must reproduce itself"
    );
}

#[test]
fn env_var_supplies_the_config_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"p": 0.3, "c": 0.5, "e": 0.1, "mu_a": 0.8, "mu_b": 0.6, "seed": 7}"#,
    )
    .unwrap();

    let out = run_ok(bin().arg("solve").env("PERSUASION_CONFIG", &config));
    let doc = stdout_json(&out);
    assert_eq!(doc["regime"], "reveal_a");
    assert_eq!(doc["config"]["seed"], 7);

    // the --p flag beats the file's prior and lands in the reveal_b band
    let out = run_ok(
        bin()
            .args(["solve", "--p", "0.15"])
            .env("PERSUASION_CONFIG", &config),
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["regime"], "reveal_b");
    assert_eq!(doc["config"]["p"], 0.15);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"p": 0.3, "c": 0.5, "e": 0.1, "mu_a": 0.8, "mu_b": 0.6, "gird": 51}"#,
    )
    .unwrap();
    let out = bin()
        .args(["solve", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gird"));
}

#[test]
fn oracle_reports_a_matching_regime_at_the_reference_point() {
    let out = run_ok(reference_flags(bin().arg("oracle")).args(["--grid", "201"]));
    let doc = stdout_json(&out);
    assert_eq!(doc["oracle"]["regime"], "reveal_a");
    assert_eq!(doc["oracle"]["best_policy"]["sigma_b"], 0.895);
    assert_eq!(doc["comparison"]["regimes_match"], true);
    assert!(doc["comparison"]["payoff_gap"].as_f64().unwrap() <= 0.01);
}

#[test]
fn oracle_surface_dump_has_the_pinned_schema() {
    let dir = tempfile::tempdir().unwrap();
    let surface = dir.path().join("surface.csv");
    run_ok(reference_flags(bin().arg("oracle")).args([
        "--grid",
        "11",
        "--surface",
        surface.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&surface).unwrap();
    assert!(text.starts_with("sigma_a,sigma_b,payoff,feasible\n"));
    assert_eq!(text.lines().count(), 122);
}

#[test]
fn simulate_is_reproducible_and_tracks_the_exact_payoff() {
    let args = ["--samples", "50000", "--seed", "9"];
    let a = run_ok(reference_flags(bin().arg("simulate")).args(args));
    let b = run_ok(reference_flags(bin().arg("simulate")).args(args));
    assert_eq!(a.stdout, b.stdout);
    let doc = stdout_json(&a);
    assert_eq!(doc["exact_payoff"], 0.62625);
    assert_eq!(doc["stats"]["n"], 50000);
    let mean = doc["stats"]["pm_mean"].as_f64().unwrap();
    let se = doc["stats"]["pm_se"].as_f64().unwrap();
    assert!((mean - 0.62625).abs() <= 4.0 * se);
}

#[test]
fn simulate_accepts_an_explicit_policy_and_writes_a_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = run_ok(reference_flags(bin().arg("simulate")).args([
        "--sigma-a",
        "1.0",
        "--sigma-b",
        "1.0",
        "--samples",
        "20000",
        "--trace",
        trace.to_str().unwrap(),
    ]));
    let doc = stdout_json(&out);
    assert_eq!(doc["exact_payoff"], 0.621);
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("chunk,n,pm_sum,pm_sumsq,a_count,b_count,none_count\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn sweep_emits_the_pinned_csv() {
    let out = run_ok(reference_flags(bin().arg("sweep")).args([
        "--e-min",
        "0.05",
        "--e-max",
        "0.15",
        "--e-steps",
        "3",
    ]));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "e,sigma_lower,sigma_upper,sigma_hat,e_bar_flag,p_lower,p_tilde,p_hat,p_bar"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("0.1,"));
    assert!(rows[2].contains(",0.3,")); // p_hat = e/c = 0.3 on the last row
}

#[test]
fn regions_emit_the_pinned_csv() {
    let out = run_ok(reference_flags(bin().arg("regions")).args([
        "--p-min",
        "0.05",
        "--p-max",
        "0.3",
        "--p-steps",
        "3",
        "--e-min",
        "0.1",
        "--e-max",
        "0.1",
        "--e-steps",
        "1",
    ]));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,e,regime_closed,regime_oracle,boundary_flag");
    assert!(lines[1].contains("opaque_both"));
    assert!(lines[2].contains("reveal_b"));
    assert!(lines[3].contains("reveal_a"));
}

#[test]
fn verify_filter_runs_and_passes() {
    let out = run_ok(bin().args(["verify", "--only", "reference-point"]));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS reference-point"));
    assert!(text.contains("passed 1/1 checks"));
}

#[test]
fn unwritable_output_exits_three() {
    let out = reference_flags(bin().arg("solve"))
        .args(["--output", "/nonexistent-dir/solution.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn format_mismatch_exits_one() {
    let out = reference_flags(bin().arg("sweep"))
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn textbook_mode_is_accepted_and_echoed() {
    let out = run_ok(reference_flags(bin().arg("solve")).args(["--mode", "textbook"]));
    let doc = stdout_json(&out);
    assert_eq!(doc["config"]["mode"], "textbook");
}

#[test]
fn config_file_must_exist_when_named() {
    let out = bin()
        .args([
            "solve",
            "--config",
            Path::new("/no/such/file.json").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
