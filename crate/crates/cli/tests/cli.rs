use std::process::{Command, Output};

use serde_json::Value;

fn qpade(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpade"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = qpade(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn rows(v: &Value) -> &Vec<Value> {
    v["rows"].as_array().expect("rows array")
}

#[test]
fn table_first_rows() {
    let v = json(&["table", "--p", "2", "--n-max", "1"]);
    assert_eq!(v["schema"], "qpade/1");
    let r = rows(&v);
    assert_eq!(r.len(), 2);
    assert_eq!((r[0]["a"].as_str(), r[0]["b"].as_str()), (Some("0"), Some("1")));
    assert_eq!((r[1]["a"].as_str(), r[1]["b"].as_str()), (Some("11"), Some("4")));
}

#[test]
fn json_holds_only_strings() {
    fn check(v: &Value) {
        match v {
            Value::Number(n) => panic!("bare number {n} in output"),
            Value::Array(a) => a.iter().for_each(check),
            Value::Object(o) => o.values().for_each(check),
            _ => {}
        }
    }
    check(&json(&["table", "--p", "2,3", "--n-max", "4"]));
    check(&json(&["asymptotics", "--p", "2", "--n-max", "3"]));
}

#[test]
fn csv_and_json_agree() {
    let args = ["table", "--p", "3,2", "--n-max", "5"];
    let v = json(&args);
    let out = qpade(&[&args[..], &["--format", "csv"]].concat());
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), rows(&v).len());
    for (rec, row) in records.iter().zip(rows(&v)) {
        for (name, field) in header.iter().zip(rec.iter()) {
            let expected = row.get(name).and_then(Value::as_str).unwrap_or("");
            assert_eq!(field, expected, "column {name}");
        }
    }
}

#[test]
fn rows_ordered_by_n_then_p() {
    let v = json(&["table", "--p", "5,2,3", "--n-max", "2"]);
    let keys: Vec<(String, String)> = rows(&v)
        .iter()
        .map(|r| (r["n"].as_str().unwrap().into(), r["p"].as_str().unwrap().into()))
        .collect();
    let expected: Vec<(String, String)> = (0..=2)
        .flat_map(|n| [2, 3, 5].map(move |p| (n.to_string(), p.to_string())))
        .collect();
    assert_eq!(keys, expected);
}

#[test]
fn verify_integrality() {
    let out = qpade(&["verify", "--suite", "integrality", "--p", "2,3", "--n-max", "20"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_identities() {
    let out = qpade(&["verify", "--suite", "identities", "--n-max", "25", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("summary:") && text.contains(" 0 failed"));
}

#[test]
fn verify_reports_anchors() {
    let v = json(&["verify", "--suite", "residues", "--p", "2", "--n-max", "3"]);
    assert!(rows(&v).iter().all(|c| !c["anchor"].as_str().unwrap().is_empty()));
    assert!(rows(&v).iter().all(|c| c["status"] == "pass"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["verify", "--suite", "all", "--n-max", "-1"][..],
        &["table", "--p", "1", "--n-max", "2"],
        &["table", "--bits", "lots"],
        &["table", "--format", "xml"],
        &["frobnicate"],
    ] {
        assert_eq!(qpade(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn asymptotics_references() {
    let out = qpade(&["asymptotics", "--p", "2", "--n-max", "2", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("-0.64208"));
    assert!(text.contains("3.8936"));
    let v = json(&["asymptotics", "--p", "2", "--n-max", "2"]);
    assert_eq!(rows(&v).len(), 2);
}

#[test]
fn asymptotics_needs_two_rows() {
    assert_eq!(qpade(&["asymptotics", "--n-max", "1"]).status.code(), Some(1));
}

#[test]
fn identity_rows() {
    let v = json(&["identity", "--p", "2,5", "--n-max", "6"]);
    assert_eq!(rows(&v).len(), 14);
    assert!(rows(&v).iter().all(|r| r["q_binomial_identity"] == true && r["harmonic_identity"] == true));
}

#[test]
fn deterministic_across_runs_and_threads() {
    let args = ["table", "--p", "2,3", "--n-max", "8", "--format", "csv"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qpade"))
            .args(args)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let first = run("1");
    assert_eq!(first, run("1"));
    assert_eq!(first, run("4"));
}

#[test]
fn fixed_bits_too_low_is_a_precision_failure() {
    let out = qpade(&["table", "--p", "2", "--n-max", "6", "--bits", "4"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
