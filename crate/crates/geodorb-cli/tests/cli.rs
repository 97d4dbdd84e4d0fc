//! End-to-end tests of the command-line interface: flag validation, the
//! exit-code contract, report shape, and file round trips.

use std::fs;
use std::path::Path;
use std::process::Command;

use geodorb::homspace::{su3_su2, EnergyForm};
use geodorb::jsonio::model_to_json;
use nalgebra::{DMatrix, DVector};

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_geodorb"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn report_of(stdout: &str) -> serde_json::Value {
    serde_json::from_str(stdout).expect("report is valid JSON")
}

/// Family model with the non-g.o. probe form, written to a JSON file.
fn write_broken_model(path: &Path) {
    let (model, _) = su3_su2(1.0, 1.0).unwrap();
    let s = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 4.0, 2.0, 2.0, 2.0]));
    let form = EnergyForm::quadratic(s).unwrap();
    fs::write(path, model_to_json(&model, &form)).unwrap();
}

#[test]
fn su3_model_file_round_trips_through_go_test() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("su3.json");
    let (code, _, _) = run(&[
        "su3",
        "--alpha",
        "1",
        "--beta",
        "2",
        "--output",
        model_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let (code, stdout, _) = run(&[
        "go-test",
        "--model",
        model_path.to_str().unwrap(),
        "--samples",
        "1000",
        "--seed",
        "0",
    ]);
    assert_eq!(code, 0);
    let report = report_of(&stdout);
    assert_eq!(report["result"]["verdict"], "go");
    assert_eq!(report["generator"], "chacha8");
    assert_eq!(report["config"]["samples"], 1000);
    assert_eq!(
        report["config"]["model_path"],
        model_path.to_str().unwrap()
    );
}

#[test]
fn natred_on_unequal_parameters_exits_2() {
    let (code, stdout, _) = run(&["natred", "--alpha", "1", "--beta", "2"]);
    assert_eq!(code, 2);
    let report = report_of(&stdout);
    assert_eq!(report["result"]["verdict"], "not_naturally_reductive");
}

#[test]
fn go_test_on_broken_form_exits_2_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    write_broken_model(&path);
    let (code, stdout, _) = run(&["go-test", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    let report = report_of(&stdout);
    assert_eq!(report["result"]["verdict"], "not_go");
    assert!(report["result"]["counterexample"].is_array());
}

#[test]
fn equilibria_at_unsolvable_momentum_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    write_broken_model(&path);
    let (code, stdout, _) = run(&[
        "equilibria",
        "--model",
        path.to_str().unwrap(),
        "--p",
        "1,1,0,0,0",
    ]);
    assert_eq!(code, 2);
    let report = report_of(&stdout);
    assert_eq!(report["result"]["set"]["solvable"], false);
}

#[test]
fn validate_reports_jacobi_residual_for_corrupted_brackets() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // [X, Y] = Z together with [Y, Z] = Y violates the Jacobi identity.
    fs::write(&path, r#"{"dim":3,"brackets":[[0,1,2,1.0],[1,2,1,1.0]]}"#).unwrap();
    let (code, _, stderr) = run(&["validate", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(
        stderr.contains("jacobi_residual"),
        "diagnostic must name the jacobi residual: {stderr}"
    );
}

#[test]
fn malformed_json_exits_1_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\n  \"dim\": 3,\n]").unwrap();
    let (code, _, stderr) = run(&["validate", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("line"), "diagnostic must locate the error: {stderr}");
}

#[test]
fn validate_accepts_algebra_only_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heisenberg.json");
    fs::write(&path, r#"{"dim":3,"brackets":[[0,1,2,1.0]]}"#).unwrap();
    let (code, stdout, _) = run(&["validate", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let report = report_of(&stdout);
    assert_eq!(report["result"]["dim"], 3);
    assert!(report["result"].get("k").is_none(), "bare algebras have no split");
}

#[test]
fn model_commands_reject_algebra_only_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heisenberg.json");
    fs::write(&path, r#"{"dim":3,"brackets":[[0,1,2,1.0]]}"#).unwrap();
    let (code, _, stderr) = run(&["go-test", "--model", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("full model"), "diagnostic: {stderr}");
}

#[test]
fn orbit_search_exhausting_its_budget_exits_3() {
    let (code, _, stderr) = run(&[
        "orbit-search",
        "--alpha",
        "1",
        "--beta",
        "2",
        "--a0",
        "0,0,0,1,0,0,0,1",
        "--max-iter",
        "1",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(code, 3);
    assert!(stderr.contains("no convergence"), "diagnostic: {stderr}");
}

#[test]
fn missing_model_flags_exit_1() {
    let (code, _, stderr) = run(&["go-test"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("--model") && stderr.contains("--alpha"));

    let (code, _, stderr) = run(&["go-test", "--alpha", "1"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("together"), "diagnostic: {stderr}");
}

#[test]
fn invalid_flag_values_exit_1() {
    let (code, _, _) = run(&["go-test", "--alpha", "1", "--beta", "2", "--samples", "0"]);
    assert_eq!(code, 1);

    let (code, _, _) = run(&["go-test", "--alpha", "1", "--beta", "2", "--tol", "-1"]);
    assert_eq!(code, 1);

    // Wrong coordinate count.
    let (code, _, stderr) = run(&["graph", "--alpha", "1", "--beta", "2", "--p", "1,0"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("coordinates"), "diagnostic: {stderr}");

    // Unknown subcommand flag combination: unknown invariant name.
    let (code, _, stderr) = run(&[
        "graph",
        "--alpha",
        "1",
        "--beta",
        "2",
        "--p",
        "1,0,0,0,1",
        "--from-invariant",
        "y9",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("unknown invariant"), "diagnostic: {stderr}");
}

#[test]
fn graph_from_named_invariant_works() {
    let (code, stdout, _) = run(&[
        "graph",
        "--alpha",
        "1",
        "--beta",
        "2",
        "--p",
        "1,0,0,0,1",
        "--from-invariant",
        "y2",
    ]);
    assert_eq!(code, 0);
    let report = report_of(&stdout);
    let xi = report["result"]["xi"].as_array().unwrap();
    assert_eq!(xi.len(), 8);
}

#[test]
fn pinned_momenta_extend_the_sample_list() {
    let (code, stdout, _) = run(&[
        "go-test",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--samples",
        "10",
        "--pin",
        "1,0,0,0,0",
        "--pin",
        "0,0,0,0,1",
    ]);
    assert_eq!(code, 0);
    let report = report_of(&stdout);
    // 5 axes + 10 axis pairs + 10 random + 2 pinned.
    assert_eq!(report["result"]["samples_tested"], 27);
}

#[test]
fn lp_integrate_writes_trajectory_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("traj.csv");
    let (code, stdout, _) = run(&[
        "lp-integrate",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--h",
        "half-z2",
        "--mu0",
        "0.3,-0.2,0.1,1,0.5,-0.4,0.2,1",
        "--dt",
        "0.1",
        "--t-end",
        "1",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report = report_of(&stdout);
    assert_eq!(report["result"]["states"], 11);

    let csv = fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,mu_0,mu_1,mu_2,mu_3,mu_4,mu_5,mu_6,mu_7"
    );
    assert_eq!(lines.count(), 11, "one row per state");
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let (code, stdout, _) = run(&[
        "derived-series",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty(), "report goes to the file, not stdout");
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["result"]["dims"], serde_json::json!([8, 8]));
    assert_eq!(report["result"]["solvable"], false);
}
