//! End-to-end tests of the `grover-sim` binary: flag handling, exit codes,
//! JSON/CSV artifact shapes, and byte-stable output.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn grover_sim<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_grover-sim"))
        .args(args)
        .env_remove("GROVER_SIM_NMAX")
        .output()
        .expect("binary spawns")
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn parse_json(output: &Output) -> Value {
    serde_json::from_str(&stdout_str(output)).expect("valid JSON on stdout")
}

#[test]
fn run_four_states_reports_certain_success() {
    let output = grover_sim([
        "run", "--n", "2", "--target", "2", "--iterations", "1", "--seed", "7",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = parse_json(&output);
    assert_eq!(report["sampled_index"], 2);
    assert_eq!(report["success"], true);
    assert_eq!(report["iterations"], 1);
    assert_eq!(report["oracle_calls"], 1);
    let prob = report["success_probability"].as_f64().unwrap();
    assert!((prob - 1.0).abs() < 1e-12);
}

#[test]
fn run_auto_ten_qubits_beats_one_half() {
    let output = grover_sim([
        "run", "--n", "10", "--target", "123", "--iterations", "auto", "--seed", "1",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = parse_json(&output);
    assert!(report["success_probability"].as_f64().unwrap() >= 0.5);
    assert_eq!(report["iterations"], 25);
}

#[test]
fn run_out_of_range_target_exits_2() {
    let output = grover_sim(["run", "--n", "2", "--target", "9"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("out of range"), "stderr: {stderr}");
}

#[test]
fn run_without_targets_exits_2() {
    let output = grover_sim(["run", "--n", "4"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn run_rejects_both_targets_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("names.txt");
    std::fs::write(&table, "ada\ngrace\n").unwrap();
    let output = grover_sim([
        "run",
        "--n",
        "1",
        "--target",
        "0",
        "--table",
        table.to_str().unwrap(),
        "--query",
        "ada",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_flags_exit_2() {
    let output = grover_sim(["run", "--qubits", "3"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn run_is_byte_stable_across_invocations() {
    let args = [
        "run", "--n", "6", "--target", "11", "--iterations", "auto", "--seed", "42",
        "--trajectory",
    ];
    let a = grover_sim(args);
    let b = grover_sim(args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn run_writes_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let output = grover_sim([
        "run",
        "--n",
        "3",
        "--target",
        "5",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report["success_probability"].as_f64().unwrap() > 0.9);
}

#[test]
fn table_and_query_drive_record_search() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("directory.txt");
    std::fs::write(&table, "ada\ngrace\nkatherine\nmargaret\n").unwrap();
    let output = grover_sim([
        "run",
        "--table",
        table.to_str().unwrap(),
        "--query",
        "katherine",
        "--iterations",
        "auto",
        "--seed",
        "5",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = parse_json(&output);
    assert_eq!(report["sampled_index"], 2);
    assert_eq!(report["success"], true);
}

#[test]
fn table_query_without_match_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("directory.txt");
    std::fs::write(&table, "ada\ngrace\n").unwrap();
    let output = grover_sim([
        "run",
        "--table",
        table.to_str().unwrap(),
        "--query",
        "nobody",
    ]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("empty"), "stderr: {stderr}");
}

#[test]
fn scan_emits_the_documented_csv() {
    let output = grover_sim([
        "scan", "--n", "2", "--target", "2", "--max-iterations", "2",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let csv = stdout_str(&output);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,k,l,prob");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "0,0.5,0.5,0.25");
    assert_eq!(lines[2], "1,1,0,1");
    // second iteration: marked amplitude +1/2, unmarked −1/2
    assert_eq!(lines[3], "2,0.5,-0.5,0.25");
}

#[test]
fn scan_first_row_is_target_fraction() {
    let output = grover_sim([
        "scan", "--n", "4", "--target", "1", "--target", "9", "--max-iterations", "1",
    ]);
    let csv = stdout_str(&output);
    let first = csv.lines().nth(1).unwrap();
    assert!(first.starts_with("0,"));
    assert!(first.ends_with(",0.125"), "row: {first}");
}

#[test]
fn scan_with_both_adds_model_columns_that_agree() {
    let output = grover_sim([
        "scan", "--n", "8", "--target", "100", "--max-iterations", "12", "--both",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let csv = stdout_str(&output);
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "m,k,l,prob,k_model,l_model,prob_model");
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 7);
        assert!((cols[1] - cols[4]).abs() < 1e-10, "k columns: {line}");
        assert!((cols[2] - cols[5]).abs() < 1e-10, "l columns: {line}");
        assert!((cols[3] - cols[6]).abs() < 1e-10, "prob columns: {line}");
    }
}

#[test]
fn scan_is_byte_stable() {
    let args = ["scan", "--n", "5", "--target", "19", "--max-iterations", "9"];
    let a = grover_sim(args);
    let b = grover_sim(args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_default_range_passes_with_exit_0() {
    let output = grover_sim(["verify"]);
    assert_eq!(output.status.code(), Some(0));
    let report = parse_json(&output);
    assert_eq!(report["all_passed"], true);
    let results = report["results"].as_array().unwrap();
    assert!(results.len() >= 6);
    for verdict in results {
        assert_eq!(verdict["passed"], true, "verdict: {verdict}");
    }
}

#[test]
fn verify_single_theorem_subset() {
    let output = grover_sim(["verify", "--theorem", "3", "--n-max", "14"]);
    assert_eq!(output.status.code(), Some(0));
    let report = parse_json(&output);
    let results = report["results"].as_array().unwrap();
    assert_eq!(results.len(), 1);
    assert_eq!(results[0]["theorem"], "amplitude growth bound");
}

#[test]
fn verify_rejects_unknown_theorem() {
    let output = grover_sim(["verify", "--theorem", "42"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn bench_csv_shape_and_scaling() {
    let output = grover_sim(["bench", "--n-min", "2", "--n-max", "10", "--trials", "2000"]);
    assert_eq!(output.status.code(), Some(0));
    let csv = stdout_str(&output);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,N,classical_mean_probes,grover_iterations,success_prob"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 9);

    // n=2 row: one iteration, certain success
    assert_eq!(rows[0][3], 1.0);
    assert!((rows[0][4] - 1.0).abs() < 1e-12);

    // n=10 row: classical ~(N+1)/2, quantum 25 iterations, prob >= 1/2
    let n10 = &rows[8];
    assert_eq!(n10[1], 1024.0);
    assert!((n10[2] - 512.5).abs() / 512.5 < 0.02, "classical {}", n10[2]);
    assert_eq!(n10[3], 25.0);
    assert!(n10[4] >= 0.5);

    // classical grows linearly, quantum like sqrt(N): quadrupling N doubles
    // the iteration count (from n = 8 up, where rounding noise is small)
    for window in rows.windows(3).skip(6) {
        let ratio = window[2][3] / window[0][3];
        assert!(
            (1.9..=2.1).contains(&ratio),
            "iterations({}) / iterations({}) = {ratio}",
            window[2][0],
            window[0][0]
        );
    }
    for window in rows.windows(3) {
        let classical_ratio = window[2][2] / window[0][2];
        assert!(
            (3.0..=5.0).contains(&classical_ratio),
            "classical mean should scale ~4x per 4x N, got {classical_ratio}"
        );
    }
}

#[test]
fn degeneracy_finds_and_reports_absence() {
    let output = grover_sim([
        "degeneracy", "--n", "6", "--target", "13", "--target", "44", "--seed", "2",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let found = parse_json(&output);
    let idx = found["found_index"].as_u64().expect("target found");
    assert!(idx == 13 || idx == 44);

    let output = grover_sim(["degeneracy", "--n", "6", "--seed", "2"]);
    assert_eq!(output.status.code(), Some(0));
    let absent = parse_json(&output);
    assert!(absent["found_index"].is_null());
    assert_eq!(absent["ranges_tried"], 6);
}

#[test]
fn nmax_env_var_overrides_the_cap() {
    let output = Command::new(env!("CARGO_BIN_EXE_grover-sim"))
        .args(["run", "--n", "12", "--target", "0"])
        .env("GROVER_SIM_NMAX", "10")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("1..=10"), "stderr: {stderr}");

    let output = Command::new(env!("CARGO_BIN_EXE_grover-sim"))
        .args(["run", "--n", "12", "--target", "0"])
        .env("GROVER_SIM_NMAX", "12")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn run_help_exits_0() {
    let output = grover_sim(["--help"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout_str(&output).contains("degeneracy"));
}

fn outputs_match(path_a: &Path, path_b: &Path) -> bool {
    std::fs::read(path_a).unwrap() == std::fs::read(path_b).unwrap()
}

#[test]
fn file_outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let output = grover_sim([
            "bench",
            "--n-min",
            "2",
            "--n-max",
            "6",
            "--trials",
            "500",
            "--seed",
            "9",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0));
    }
    assert!(outputs_match(&a, &b));
}
