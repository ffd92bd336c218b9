use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).to_str().unwrap().to_string()
}

fn kh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kh")).args(args).env_remove("KH_SEED").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn pd_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".pd").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn unknot_json() {
    let out = kh(&["compute", &corpus("unknot.pd"), "--method", "both", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["unnormalised"][0], serde_json::json!({"deg": 0, "rank": 2, "torsion": []}));
    assert_eq!(v["method"], "both");
    assert_eq!(v["c_negative"], 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn json_keys_follow_the_schema() {
    let v = json(&kh(&["compute", &corpus("hopf.pd"), "--format", "json"]));
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = vec!["diagram", "c_negative", "unnormalised", "normalised", "method", "checks"];
    want.sort();
    let mut keys = keys;
    keys.sort();
    assert_eq!(keys, want);
}

#[test]
fn trefoil_window_lists_every_degree() {
    let v = json(&kh(&["compute", &corpus("trefoil.pd"), "--format", "json"]));
    let degs: Vec<i64> = v["normalised"].as_array().unwrap().iter().map(|d| d["deg"].as_i64().unwrap()).collect();
    assert_eq!(degs, vec![-3, -2, -1, 0]);
    assert_eq!(v["normalised"][1]["torsion"], serde_json::json!([2]));
    assert_eq!(v["normalised"][2]["rank"], 0);
}

#[test]
fn malformed_input_exits_two() {
    let f = pd_file("X(1,2,2)\n");
    let out = kh(&["compute", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed PD code"));
}

#[test]
fn open_diagram_exits_two() {
    let f = pd_file("X(1,2,3,4)\n");
    assert_eq!(kh(&["compute", f.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn missing_file_exits_two() {
    assert_eq!(kh(&["compute", "/nonexistent/knot.pd"]).status.code(), Some(2));
}

#[test]
fn nerve_guard_exits_two() {
    let out = kh(&["compute", &corpus("trefoil.pd"), "--method", "nerve", "--nerve-limit", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_output_with_normalised_only() {
    let out = kh(&["compute", &corpus("kink_negative.pd"), "--normalised"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(!s.contains("unnormalised"));
    assert!(s.contains("H^0   Z^2"));
}

#[test]
fn verify_signs() {
    let out = kh(&["verify", "signs", "--rank", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 7);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["anchor"] == "sign-audit"));
}

#[test]
fn verify_skein_one_crossing() {
    let out = kh(&["verify", "skein", &corpus("trefoil.pd"), "--crossing", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("skein: 2 checks, 0 failed"));
}

#[test]
fn verify_skein_bad_crossing() {
    assert_eq!(kh(&["verify", "skein", &corpus("trefoil.pd"), "--crossing", "9"]).status.code(), Some(2));
}

#[test]
fn verify_fiber_suite_command() {
    let out = kh(&["verify", "section3", "--trials", "10", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_les_with_file() {
    let out = kh(&["verify", "les", &corpus("trefoil.pd"), "--trials", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checks"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_resolution() {
    assert_eq!(kh(&["verify", "resolution", "--rank", "3"]).status.code(), Some(0));
}

#[test]
fn verify_reidemeister_parallel_matches_serial() {
    let file = corpus("hopf.pd");
    let serial = kh(&["verify", "reidemeister", &file, "--jobs", "1", "--format", "json"]);
    let parallel = kh(&["verify", "reidemeister", &file, "--jobs", "4", "--format", "json"]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn verify_reidemeister_needs_a_file() {
    assert_eq!(kh(&["verify", "reidemeister"]).status.code(), Some(2));
}

#[test]
fn seed_variable_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_kh"))
        .args(["verify", "section3", "--trials", "2", "--seed", "5", "--format", "json"])
        .env("KH_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 17);
    let bad = Command::new(env!("CARGO_BIN_EXE_kh")).args(["verify", "section3"]).env("KH_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn connected_sum_example() {
    let out = kh(&["example", "connected-sum", &corpus("trefoil.pd"), &corpus("unknot.pd"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["clasped_sum"], v["expected"]);
}

#[test]
fn diagram_summary_in_json() {
    let f = pd_file("# two loops\nU 2\n");
    let v = json(&kh(&["compute", f.path().to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["diagram"]["free_loops"], 2);
    assert_eq!(v["unnormalised"][0]["rank"], 4);
}
