//! End-to-end behavior of the `mkcalc` binary: exit-code contract, error
//! reporting, output formats, and round-trips.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn mkcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mkcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn mkcalc_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mkcalc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary finishes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn exit(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

const EXAMPLE_1: &str = "1 1 2 2 3 3 4 4\n3 4 4 3 1 2 2 1\n";

#[test]
fn analyze_reads_a_file_and_reports_the_category() {
    let dir = std::env::temp_dir().join("mkcalc-cli-test-analyze");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("example1.txt");
    std::fs::write(&path, EXAMPLE_1).unwrap();

    let out = mkcalc(&["analyze", path.to_str().unwrap()]);
    assert_eq!(exit(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("category: both_hold (independent: true, equal: true)"));
    assert!(text.contains("prevalence             = 1/2"));
    assert!(text.contains("route checks:"));
    assert!(!text.contains("DISAGREE"));
}

#[test]
fn analyze_reads_stdin_with_dash() {
    let out = mkcalc_stdin(&["analyze", "-"], EXAMPLE_1);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("category: both_hold"));
}

#[test]
fn malformed_fifteen_entry_table_exits_one() {
    let out = mkcalc_stdin(&["analyze", "-"], "1 1 2 2 3 3 4 4\n3 4 4 3 1 2 2\n");
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("found 15"));
}

#[test]
fn bad_token_reports_position_and_exits_one() {
    let out = mkcalc_stdin(&["analyze", "-"], "1 1 2 2 3 3 4 4\n3 4 oops 3 1 2 2 1\n");
    assert_eq!(exit(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column 5"), "{err}");
}

#[test]
fn zero_reference_margin_exits_two_naming_the_margin() {
    let out = mkcalc_stdin(&["analyze", "-"], "1 0 2 0 3 0 4 0\n3 0 4 0 1 0 2 0\n");
    assert_eq!(exit(&out), 2);
    assert!(stderr(&out).contains("++1+"));
}

#[test]
fn missing_file_exits_one() {
    let out = mkcalc(&["analyze", "/nonexistent/table.txt"]);
    assert_eq!(exit(&out), 1);
}

#[test]
fn unknown_category_exits_one() {
    let out = mkcalc(&["search", "--category", "sideways", "--seed", "1", "--budget", "10"]);
    assert_eq!(exit(&out), 1);
}

#[test]
fn zero_budget_and_zero_iters_are_usage_errors() {
    let out = mkcalc(&["search", "--category", "both-hold", "--seed", "1", "--budget", "0"]);
    assert_eq!(exit(&out), 1);
    let out = mkcalc(&["crosscheck", "--seed", "1", "--iters", "0"]);
    assert_eq!(exit(&out), 1);
}

#[test]
fn help_exits_zero() {
    let out = mkcalc(&["--help"]);
    assert_eq!(exit(&out), 0);
}

#[test]
fn structured_analyze_is_valid_lossless_json() {
    let out = mkcalc_stdin(&["analyze", "-", "--format", "structured"], EXAMPLE_1);
    assert_eq!(exit(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["category"], "both_hold");
    assert_eq!(doc["independent"], true);
    assert_eq!(doc["n"], 40);

    // Lossless: re-parse the echoed table, recompute, compare documents.
    let echoed = doc["table_text"].as_str().unwrap();
    let reparsed = mkcalc_stdin(&["analyze", "-", "--format", "structured"], echoed);
    assert_eq!(stdout(&out), stdout(&reparsed));

    // Exact strings parse back to the rationals they came from.
    let q0 = doc["kernels"]["q"]["mass"][0]["exact"].as_str().unwrap();
    assert_eq!(
        mkcalc_core::rational::parse_rat(q0).unwrap(),
        mkcalc_core::rational::rat(1, 2)
    );
}

#[test]
fn output_flag_writes_the_json_document() {
    let dir = std::env::temp_dir().join("mkcalc-cli-test-output");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let _ = std::fs::remove_file(&path);

    let out = mkcalc_stdin(
        &["analyze", "-", "--output", path.to_str().unwrap()],
        EXAMPLE_1,
    );
    assert_eq!(exit(&out), 0);
    // Text still on stdout, JSON in the file.
    assert!(stdout(&out).contains("category: both_hold"));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["category"], "both_hold");
}

#[test]
fn verify_paper_passes_and_prints_audit_values() {
    let out = mkcalc(&["verify-paper"]);
    assert_eq!(exit(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    for needle in [
        "example-1: expected both_hold, observed both_hold .. PASS",
        "example-2: expected both_fail, observed both_fail .. PASS",
        "example-3: expected equality_without_independence, observed equality_without_independence .. PASS",
        "E(m | m1 = 1) = 1/2",
        "E(m | m1 = 1) = 199/399",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
    }
}

#[test]
fn analyze_third_example_reports_equality_without_independence() {
    let out = mkcalc_stdin(&["analyze", "-"], "1 1 2 2 3 3 4 4\n3 4 4 1 1 2 2 3\n");
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("category: equality_without_independence (independent: false, equal: true)"));
    assert!(!text.contains("DISAGREE"));
    assert!(!text.contains("masked"));
}

#[test]
fn search_witness_round_trips_through_analyze() {
    let out = mkcalc(&["search", "--category", "both-fail", "--seed", "11", "--budget", "5000"]);
    assert_eq!(exit(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    // The witness is the two lines directly after the found-banner.
    let mut lines = text.lines();
    let banner = lines.next().unwrap();
    assert!(banner.contains("found a both_fail table"));
    let witness = format!("{}\n{}\n", lines.next().unwrap(), lines.next().unwrap());

    let re = mkcalc_stdin(&["analyze", "-"], &witness);
    assert_eq!(exit(&re), 0);
    assert!(stdout(&re).contains("category: both_fail"));
}

#[test]
fn search_exhaustion_uses_its_own_exit_code() {
    let out = mkcalc(&[
        "search",
        "--category",
        "independence-without-equality",
        "--seed",
        "2",
        "--budget",
        "50",
    ]);
    assert_eq!(exit(&out), 3);
    assert!(stdout(&out).contains("exhausted"));
}

#[test]
fn crosscheck_thousand_iterations_exits_zero() {
    let out = mkcalc(&["crosscheck", "--seed", "8", "--iters", "1000"]);
    assert_eq!(exit(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("all routes agree"));
    for check in [
        "route_equivalence",
        "functional_equivalence",
        "tower_identity",
        "defining_identity",
    ] {
        assert!(text.contains(check), "{text}");
        assert!(text.contains("run   1000  failed 0"), "{text}");
    }
}
