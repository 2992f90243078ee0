use std::process::{Command, Output};

use serde_json::Value;

fn stablelimit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stablelimit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_run(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["run", "--format", "json"];
    all.extend_from_slice(args);
    let out = stablelimit(&all);
    let doc = serde_json::from_slice(&out.stdout).expect("valid json");
    (out.status.code().unwrap(), doc)
}

fn strip_timing(mut doc: Value) -> Value {
    for s in doc["scenarios"].as_array_mut().unwrap() {
        s.as_object_mut().unwrap().remove("millis");
    }
    doc
}

const IDS: [&str; 18] = [
    "expansion",
    "branch",
    "delta",
    "singularities",
    "deform-derive",
    "system-I1",
    "system-I2",
    "system-I3",
    "system-I4",
    "system-I5",
    "system-I6",
    "system-I7",
    "system-lefschetz",
    "basis-count",
    "ramification",
    "lattice",
    "diophantine",
    "gamma",
];

#[test]
fn list_prints_every_id_with_a_citation() {
    let out = stablelimit(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), IDS.len());
    for (line, id) in lines.iter().zip(IDS) {
        let (head, rest) = line.split_once(' ').unwrap();
        assert_eq!(head, id);
        assert!(!rest.trim().is_empty());
    }
}

#[test]
fn unknown_id_is_a_usage_error() {
    let out = stablelimit(&["run", "--scenario", "diophantine", "--scenario", "no-such-id"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-id"));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(stablelimit(&["run", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(stablelimit(&["run", "--jobs", "0"]).status.code(), Some(2));
    assert_eq!(stablelimit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn diophantine_json_record() {
    let (code, doc) = json_run(&["--scenario", "diophantine"]);
    assert_eq!(code, 0);
    assert_eq!(doc["prime"], 7);
    assert!(doc["version"].is_string());
    let s = doc["scenarios"].as_array().unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0]["id"], "diophantine");
    assert_eq!(s[0]["status"], "pass");
    assert_eq!(s[0]["computed"]["bound 100, target 2"], serde_json::json!([[2, 2, 3]]));
    for key in ["citation", "expected", "provenance", "notes", "millis"] {
        assert!(s[0].get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["summary"], serde_json::json!({"passed": 1, "failed": 0, "flagged": 0}));
}

#[test]
fn results_follow_registry_order() {
    let (_, doc) = json_run(&["--scenario", "gamma", "--scenario", "expansion", "--scenario", "gamma"]);
    let ids: Vec<&str> = doc["scenarios"].as_array().unwrap().iter().map(|s| s["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["expansion", "gamma"]);
}

#[test]
fn serial_and_parallel_runs_agree() {
    let (serial_code, serial) = json_run(&["--jobs", "1"]);
    let (parallel_code, parallel) = json_run(&["--jobs", "4"]);
    assert_eq!(serial_code, parallel_code);
    assert_eq!(strip_timing(serial.clone()), strip_timing(parallel));

    let ids: Vec<&str> = serial["scenarios"].as_array().unwrap().iter().map(|s| s["id"].as_str().unwrap()).collect();
    assert_eq!(ids, IDS);
    let summary = &serial["summary"];
    let failed = summary["failed"].as_u64().unwrap();
    assert_eq!(summary["passed"].as_u64().unwrap() + failed, IDS.len() as u64);
    assert_eq!(serial_code, if failed == 0 { 0 } else { 1 });
}

#[test]
fn text_and_json_verdicts_agree() {
    let (_, doc) = json_run(&[]);
    let out = stablelimit(&["run", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for s in doc["scenarios"].as_array().unwrap() {
        let id = s["id"].as_str().unwrap();
        let line = text
            .lines()
            .find(|l| l.split_whitespace().nth(1) == Some(id))
            .unwrap_or_else(|| panic!("{id} missing from text report"));
        assert_eq!(line.split_whitespace().next().unwrap(), s["status"].as_str().unwrap().to_uppercase());
    }
}

#[test]
fn out_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = stablelimit(&["run", "--scenario", "gamma", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["scenarios"][0]["id"], "gamma");

    let missing = dir.path().join("no/such/dir/report.json");
    let out = stablelimit(&["run", "--scenario", "gamma", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
