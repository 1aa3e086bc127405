use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dforms")).args(args).output().expect("spawn dforms")
}

fn write_tmp(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("dforms-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const SPHERE4: &str = r#"{"model":"constant","n":4,"lambda":"1"}"#;

#[test]
fn invariants_on_the_unit_four_sphere() {
    let spec = write_tmp("s4.json", SPHERE4);
    let out = dforms(&["invariants", "--spec", spec.to_str().unwrap(), "--max-q", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    // h_2 = n(n-1) and h_4 = n!/(n-4)! on S^4
    assert_eq!(v["rows"][0]["h"], "6/1");
    assert_eq!(v["rows"][1]["h"], "6/1");
    assert_eq!(v["h4_sign"]["holds"], true);
    assert_eq!(v["samples"][1]["value"], "3/1");
}

#[test]
fn table_format_lists_every_row() {
    let spec = write_tmp("s4t.json", SPHERE4);
    let out = dforms(&["invariants", "--spec", spec.to_str().unwrap(), "--max-q", "2", "--format", "table"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n = 4"));
    assert!(text.contains("T_2:") && text.contains("T_4:"));
    assert!(text.contains("hypothesis=einstein"));
}

#[test]
fn pq_on_a_coordinate_plane() {
    let spec = write_tmp("pq.json", r#"{"model":"constant","n":5,"lambda":"2"}"#);
    let out = dforms(&["pq", "--spec", spec.to_str().unwrap(), "--p", "2", "--q", "1", "--plane", "0,3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    // half the scalar curvature of the complement: λ(n-p)(n-p-1)/2
    assert_eq!(v["value"], "6/1");
    assert_eq!(v["plane"], serde_json::json!([0, 3]));
}

#[test]
fn pq_rejects_wrong_plane_size() {
    let spec = write_tmp("pqbad.json", SPHERE4);
    let out = dforms(&["pq", "--spec", spec.to_str().unwrap(), "--p", "2", "--q", "1", "--plane", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_reconstructs_its_input() {
    // g on R^3 is g·1, so the only nonzero component is the degree 0 one
    let form = r#"{"n":3,"p":1,"q":1,"entries":[[[0],[0],"1"],[[1],[1],"1"],[[2],[2],"1"]]}"#;
    let input = write_tmp("g3.json", form);
    let out = dforms(&["decompose", "--input", input.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["n"], 3);
    assert_eq!(v["p"], 1);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["entries"].as_array().unwrap().len(), 1);
    assert!(comps[1]["entries"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_spec_exits_two_with_message() {
    let spec = write_tmp("bad.json", r#"{"model":"constant","n":4,"lambda":"x"}"#);
    let out = dforms(&["invariants", "--spec", spec.to_str().unwrap(), "--max-q", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("lambda"), "{err}");
}

#[test]
fn unknown_field_is_rejected() {
    let spec = write_tmp("extra.json", r#"{"model":"constant","n":4,"lambda":"1","mu":2}"#);
    let out = dforms(&["invariants", "--spec", spec.to_str().unwrap(), "--max-q", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_q_out_of_range() {
    let spec = write_tmp("mq.json", SPHERE4);
    let out = dforms(&["invariants", "--spec", spec.to_str().unwrap(), "--max-q", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_unknown_suite_and_dimension() {
    assert_eq!(dforms(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(dforms(&["verify", "--suite", "hodge", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_and_clean() {
    let args = ["verify", "--suite", "core-identities", "--n", "3", "--trials", "5", "--seed", "11"];
    let a = dforms(&args);
    let b = dforms(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert!(v.to_string().contains("\"failures\""));
}

#[test]
fn cell_budget_exhaustion_is_an_error() {
    let spec = write_tmp("budget.json", r#"{"model":"constant","n":6,"lambda":"1"}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_dforms"))
        .args(["invariants", "--spec", spec.to_str().unwrap(), "--max-q", "3"])
        .env("DFORMS_CELL_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}
