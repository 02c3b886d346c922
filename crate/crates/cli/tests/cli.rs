use std::fs;
use std::process::{Command, Output};

use intersets::report::{report_from_json, TSV_HEADER};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intersets")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn spec_file(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn sumset_of_finite_set() {
    let o = run(&["sumset", "--set", "finite:0,1,3", "--h", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("0 1 2 3 4 6"));
    assert!(out.contains("complete"));
}

#[test]
fn windowed_sumset_reports_completeness() {
    let o = run(&["sumset", "--set", "halftail:3", "--h", "2", "--window=-5:10"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("6 7 8 9 10"));
}

#[test]
fn representation_counts() {
    let o = run(&["repfn", "--mode", "mult", "--set", "nonzero", "--h", "2", "--x", "6"]);
    assert_eq!(stdout(&o).trim(), "8");
    let o = run(&["repfn", "--mode", "add", "--set", "all", "--h", "2", "--x", "0"]);
    assert_eq!(stdout(&o).trim(), "infinite");
    let o = run(&["repfn", "--mode", "add", "--set", "finite:0,1,3", "--h", "2", "--x=-1"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn hset_tail_family_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(&dir, "tail.json", r#"{"family": "tail", "core": {"kind": "empty"}}"#);
    let o = run(&["hset", &spec]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], TSV_HEADER);
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("1\tcertified_in"));
    assert!(lines[2..].iter().all(|l| l.contains("\tcertified_out\t")));
}

#[test]
fn hset_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let spec = spec_file(
        &dir,
        "chain.json",
        r#"{"family": "congruence_chain", "core": ["0", "1", "3"], "moduli": {"geometric": {"first": 7, "ratio": 2}}}"#,
    );
    let out = dir.path().join("report.json");
    let o = run(&["hset", &spec, "--hmax", "3", "--Q", "6", "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let report = report_from_json(&value).unwrap();
    assert_eq!(report.h_set(), vec![1, 2, 3]);
}

#[test]
fn malformed_input_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = spec_file(&dir, "bad.json", "{\"family\": ");
    let o = run(&["hset", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let wrong = spec_file(&dir, "wrong.json", r#"{"family": "tail", "core": {"kind": "finite", "elements": ["x"]}}"#);
    let o = run(&["hset", &wrong]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("core.elements[0]"));
    assert_eq!(run(&["sumset", "--set", "finite:a", "--h", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn shallow_rational_truncation_is_a_config_error() {
    let o = run(&["verify", "rational", "--Q", "3", "--h", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oversized_window_hits_the_cap() {
    let o = run(&["sumset", "--set", "halftail:0", "--h", "2", "--window=0:100000000000"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lattice.txt");
    let o = run(&["verify", "lattice", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(out).unwrap();
    assert!(text.lines().last().unwrap().starts_with("PASS suite lattice"));
}
