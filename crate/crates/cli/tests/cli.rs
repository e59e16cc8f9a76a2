use std::io::Write;
use std::process::{Command, Output, Stdio};

fn hamcycle(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hamcycle"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn decide_prints_a_trace() {
    let out = hamcycle(&["decide"], "Dhc\n");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["stage"], "verdict");
    assert_eq!(last["verdict"], "Hamiltonian");
    assert!(text.lines().next().unwrap().contains("\"stage\":\"config\""));
}

#[test]
fn decide_reads_edge_lists_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k23.txt");
    std::fs::write(&path, "n 5\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n").unwrap();
    let out = hamcycle(&["decide", "--input", path.to_str().unwrap(), "--format", "edge-list"], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"verdict\":\"NonHamiltonian\""));
}

#[test]
fn bad_input_exits_one() {
    let out = hamcycle(&["decide"], "D!!\n");
    assert_eq!(out.status.code(), Some(1));
    let out = hamcycle(&["decide", "--format", "edge-list"], "n 3\n0 7\n");
    assert_eq!(out.status.code(), Some(1));
    let out = hamcycle(&["decide"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exhausted_budget_exits_two() {
    let out = hamcycle(&["decide", "--budget-cycles", "2"], "D~{\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("\"verdict\":\"Undecided\""));
    let out = hamcycle(&["cycles", "--budget-cycles", "2"], "D~{\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_exit_codes_and_records() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("records.jsonl");
    let report = dir.path().join("report.json");
    let out = hamcycle(
        &[
            "sweep", "--n-min", "3", "--n-max", "5", "--jobs", "2",
            "--out", records.to_str().unwrap(),
            "--report", report.to_str().unwrap(),
            "--fail-on-discrepancy",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(3));
    let lines = std::fs::read_to_string(&records).unwrap();
    assert_eq!(lines.lines().count(), 3);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(report["records"]["discrepancies"], 3);

    let out = hamcycle(&["sweep", "--n-max", "5", "--strict-boundary", "--fail-on-discrepancy"], "");
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["matrix"]["hamiltonian_agree"].as_u64().unwrap() + report["matrix"]["non_agree"].as_u64().unwrap(), 29);

    let out = hamcycle(&["sweep", "--n-max", "4", "--out", "/nonexistent/dir/x.jsonl"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_reduce_and_cycles() {
    let out = hamcycle(&["oracle"], "Dhc\nDK{\n");
    let lines: Vec<serde_json::Value> = stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["hamiltonian"], true);
    assert_eq!(lines[0]["cycle"], serde_json::json!([0, 1, 2, 3, 4]));

    let out = hamcycle(&["reduce", "--format", "edge-list"], "n 5\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n");
    assert!(stdout(&out).contains("\"reason\":\"N3-found\""));

    let out = hamcycle(&["cycles"], "C~\n");
    assert_eq!(stdout(&out).lines().count(), 7);
    let out = hamcycle(&["cycles", "--kind", "spanning"], "C~\n");
    assert!(stdout(&out).contains("[[0,1,2,3]]"));
    let out = hamcycle(&["cycles", "--kind", "full", "--budget-sets", "3"], "C~\n");
    assert_eq!(stdout(&out).lines().count(), 3);
}

#[test]
fn consistency_minimize_and_dot() {
    let out = hamcycle(&["consistency", "--k", "3"], "C~\n");
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["sets_available"], 3);

    let out = hamcycle(&["minimize"], "DN{\n");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "DN{");
    let out = hamcycle(&["minimize"], "Dhc\n");
    assert_eq!(out.status.code(), Some(1));

    let out = hamcycle(&["dot"], "Bw\n");
    assert_eq!(stdout(&out), "graph G {\n  0;\n  1;\n  2;\n  0 -- 1;\n  0 -- 2;\n  1 -- 2;\n}\n");
    let out = hamcycle(&["dot", "--annotate", "full"], "C~\n");
    assert!(stdout(&out).contains("R="));
}
