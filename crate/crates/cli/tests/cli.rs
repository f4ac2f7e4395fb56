//! End-to-end tests of the `gather` binary: exit codes, output files,
//! and the environment-variable output redirection.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gather_core::geometry::Point2;
use gather_core::model::{Frame, Robot};
use gather_core::scalar::ratio;
use gather_core::scenario::Scenario;
use gather_core::AlgorithmKind;

fn gather_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gather"))
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// Two robots facing the same way half a unit apart: gathers in two
/// synchronous rounds under the rendezvous rule.
fn two_round_scenario() -> Scenario {
    let robot = |x: i64, den: i64| Robot {
        position: Point2::new(ratio(x, den).into(), ratio(0, 1).into()),
        frame: Frame::identity(),
        crashed: false,
    };
    Scenario::new(AlgorithmKind::Suir, vec![robot(0, 1), robot(1, 2)])
}

fn write_scenario(dir: &Path, scenario: &Scenario) -> std::path::PathBuf {
    let path = dir.join("scenario.json");
    fs::write(&path, scenario.to_json_pretty()).expect("write scenario");
    path
}

#[test]
fn run_gathers_and_writes_outputs() {
    let dir = tempfile::tempdir().expect("tempdir");
    let scenario = write_scenario(dir.path(), &two_round_scenario());
    let trace = dir.path().join("trace.jsonl");
    let summary = dir.path().join("rounds.csv");
    let output = gather_bin()
        .arg("run")
        .arg(&scenario)
        .arg("--trace")
        .arg(&trace)
        .arg("--summary")
        .arg(&summary)
        .output()
        .expect("run binary");
    let stdout = stdout_of(&output);
    assert_eq!(output.status.code(), Some(0), "stdout: {stdout}");
    assert!(stdout.contains("gathered at"), "stdout: {stdout}");

    let trace_text = fs::read_to_string(&trace).expect("trace written");
    let first = trace_text.lines().next().expect("nonempty trace");
    let header: serde_json::Value = serde_json::from_str(first).expect("JSONL header");
    assert_eq!(header["record"], "header");
    let last = trace_text.lines().last().expect("verdict line");
    let verdict: serde_json::Value = serde_json::from_str(last).expect("JSONL verdict");
    assert_eq!(verdict["record"], "verdict");
    assert_eq!(verdict["verdict"]["kind"], "gathered");

    let summary_text = fs::read_to_string(&summary).expect("summary written");
    let mut lines = summary_text.lines();
    assert_eq!(
        lines.next(),
        Some("round,occupied,sec_diameter_sq,min_level,max_level,phases")
    );
    assert!(lines.next().is_some(), "summary has data rows");
}

#[test]
fn run_reports_round_cap_with_exit_code_2() {
    let dir = tempfile::tempdir().expect("tempdir");
    let scenario = write_scenario(dir.path(), &two_round_scenario());
    let output = gather_bin()
        .arg("run")
        .arg(&scenario)
        .arg("--max-rounds")
        .arg("1")
        .output()
        .expect("run binary");
    let stdout = stdout_of(&output);
    assert_eq!(output.status.code(), Some(2), "stdout: {stdout}");
    assert!(stdout.contains("round cap reached"), "stdout: {stdout}");
}

#[test]
fn run_warns_when_seed_has_no_effect() {
    let dir = tempfile::tempdir().expect("tempdir");
    let scenario = write_scenario(dir.path(), &two_round_scenario());
    let output = gather_bin()
        .arg("run")
        .arg(&scenario)
        .arg("--seed")
        .arg("7")
        .output()
        .expect("run binary");
    assert_eq!(output.status.code(), Some(0));
    assert!(
        stderr_of(&output).contains("--seed given but the scenario has no seeded"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn run_rejects_missing_scenario_with_exit_code_1() {
    let output = gather_bin()
        .arg("run")
        .arg("/nonexistent/scenario.json")
        .output()
        .expect("run binary");
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("error:"));
}

#[test]
fn verify_passes_and_writes_report() {
    let dir = tempfile::tempdir().expect("tempdir");
    let report = dir.path().join("verify.json");
    let output = gather_bin()
        .arg("verify")
        .arg("--report")
        .arg(&report)
        .output()
        .expect("run binary");
    let stdout = stdout_of(&output);
    assert_eq!(output.status.code(), Some(0), "stdout: {stdout}");
    assert!(stdout.contains("51 case(s), 51 passed, 0 failed"), "stdout: {stdout}");

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).expect("report written"))
            .expect("report is JSON");
    assert_eq!(json["all_pass"], true);
    assert_eq!(json["common"].as_array().map(Vec::len), Some(16));
    assert_eq!(json["opposite"].as_array().map(Vec::len), Some(20));
    assert_eq!(json["crash"].as_array().map(Vec::len), Some(8));
    assert_eq!(json["crash_geometry"].as_array().map(Vec::len), Some(7));
}

#[test]
fn sweep_writes_csv_rows_for_every_seed() {
    let dir = tempfile::tempdir().expect("tempdir");
    let report = dir.path().join("sweep.csv");
    let output = gather_bin()
        .args(["sweep", "--algo", "suig", "--seeds", "10", "--report"])
        .arg(&report)
        .output()
        .expect("run binary");
    let stdout = stdout_of(&output);
    assert_eq!(output.status.code(), Some(0), "stdout: {stdout}");
    assert!(stdout.contains("10 run(s): 10 gathered"), "stdout: {stdout}");

    let csv = fs::read_to_string(&report).expect("CSV written");
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("seed,algorithm,robots,crashed,rounds,gathered,bound_applicable,level_spread,lowest_level,bound,within_bound")
    );
    assert_eq!(lines.count(), 10, "one row per seed");
}

#[test]
fn adversary_demo_prevents_gathering() {
    let dir = tempfile::tempdir().expect("tempdir");
    let report = dir.path().join("demo.json");
    let output = gather_bin()
        .args(["adversary-demo", "--horizon", "500", "--report"])
        .arg(&report)
        .output()
        .expect("run binary");
    let stdout = stdout_of(&output);
    assert_eq!(output.status.code(), Some(0), "stdout: {stdout}");
    assert!(stdout.contains("not gathered"), "stdout: {stdout}");
    assert!(stdout.contains("rule counts:"), "stdout: {stdout}");

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).expect("report written"))
            .expect("report is JSON");
    assert_eq!(json["gathered"], false);
    assert_eq!(json["rounds_executed"], 500);
}

#[test]
fn relative_outputs_resolve_against_out_dir_env() {
    let out_dir = tempfile::tempdir().expect("out dir");
    let work_dir = tempfile::tempdir().expect("work dir");
    let output = gather_bin()
        .args(["verify", "--report", "nested/report.json"])
        .env("GATHER_OUT_DIR", out_dir.path())
        .current_dir(work_dir.path())
        .output()
        .expect("run binary");
    assert_eq!(output.status.code(), Some(0));
    let expected = out_dir.path().join("nested/report.json");
    assert!(
        expected.is_file(),
        "report should land under GATHER_OUT_DIR, not the working directory"
    );
    assert!(!work_dir.path().join("nested/report.json").exists());
}
