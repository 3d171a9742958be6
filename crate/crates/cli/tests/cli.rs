use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dominion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dominion"))
        .args(args)
        .env_remove("DOMINION_BACKEND")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const TWO_POINTS: &str = r#"{"dimension":2,"points":[
  {"id":1,"coords":["1","1"],"color":0,"prob":"1/2"},
  {"id":2,"coords":["2","2"],"color":1,"prob":"1/2"}]}"#;

#[test]
fn solve_two_point_chain() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "two.json", TWO_POINTS);
    let exact = dominion(&["solve", "--method", "exact", "--input", &input]);
    assert!(exact.status.success());
    let v = json(&exact);
    assert_eq!(v["gamma"], "3/4");
    assert_eq!(v["lambda"], "1/4");
    assert_eq!(v["gamma_decimal"], "0.750000000000");
    for method in ["brute", "dp"] {
        let other = json(&dominion(&["solve", "--method", method, "--input", &input]));
        assert_eq!(other["gamma"], v["gamma"], "{method}");
    }
}

#[test]
fn approx_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dominion(&["generate", "--n", "5", "--seed", "3", "--probs", "half"]);
    let input = write(dir.path(), "five.json", std::str::from_utf8(&ds.stdout).unwrap());
    let run = || dominion(&["solve", "--method", "approx", "--epsilon", "1/4", "--seed", "7", "--samples", "3000", "--input", &input]);
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["epsilon"], "1/4");
    assert_eq!(v["config"]["samples"], 3000);
    assert!(v["gamma"].is_null());
}

#[test]
fn float_backend_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "two.json", TWO_POINTS);
    let out = Command::new(env!("CARGO_BIN_EXE_dominion"))
        .args(["solve", "--input", &input])
        .env("DOMINION_BACKEND", "float")
        .output()
        .unwrap();
    let v = json(&out);
    assert_eq!(v["config"]["backend"], "float");
    assert_eq!(v["gamma_decimal"], "0.750000000000");
    assert!(v.get("timing_ms").is_none());
    let timed = json(&dominion(&["solve", "--input", &input, "--timing"]));
    assert!(timed["timing_ms"].is_number());
}

#[test]
fn f_table_dump() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "two.json", TWO_POINTS);
    let v = json(&dominion(&["solve", "--input", &input, "--f-table"]));
    assert_eq!(v["f_table"][0], serde_json::json!({"i": 0, "j": 0, "F": "1"}));
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_prob = write(
        dir.path(),
        "bad.json",
        r#"{"dimension":2,"points":[{"id":1,"coords":["1","1"],"color":0,"prob":"3/2"}]}"#,
    );
    let out = dominion(&["solve", "--input", &bad_prob]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "probability_out_of_range");

    let collinear = write(
        dir.path(),
        "col.json",
        r#"{"dimension":2,"points":[
          {"id":4,"coords":["0","0"],"color":0,"prob":"1/2"},
          {"id":5,"coords":["1","1"],"color":1,"prob":"1/2"},
          {"id":6,"coords":["2","2"],"color":0,"prob":"1/2"}]}"#,
    );
    let out = dominion(&["fbcsd", "--input", &collinear]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "collinear");
    assert_eq!(v["error"]["details"]["collinear_triple"], serde_json::json!([4, 5, 6]));

    let missing = dominion(&["solve", "--input", "/nonexistent/x.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(json(&missing)["error"]["kind"], "io");
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = dominion(&[
            "generate", "--n", "5", "--seed", "4", "--probs", "half", "--colors", "distinct", "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let v: Value = serde_json::from_str(&text).unwrap();
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 5);
    assert!(points.iter().all(|p| p["prob"] == "1/2"));
    let colors: std::collections::HashSet<_> = points.iter().map(|p| p["color"].as_u64()).collect();
    assert_eq!(colors.len(), 5);

    let tiny = dominion(&["generate", "--n", "8", "--coord-range", "3", "--general-position"]);
    assert_eq!(tiny.status.code(), Some(2));
    assert_eq!(json(&tiny)["error"]["kind"], "unsatisfiable");
}

#[test]
fn fbcsd_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dominion(&["generate", "--n", "6", "--seed", "2", "--general-position", "--probs", "mixed:8"]);
    let input = write(dir.path(), "gp.json", std::str::from_utf8(&ds.stdout).unwrap());
    let exact = json(&dominion(&["fbcsd", "--input", &input]));
    let brute = json(&dominion(&["fbcsd", "--input", &input, "--method", "brute"]));
    assert_eq!(exact["lambda"], brute["lambda"]);
    assert_eq!(exact["method"], "fbcsd");
    assert_eq!(brute["method"], "fbcsd-brute");
}

#[test]
fn selftest_passes_and_detects_faults() {
    let ok = dominion(&["selftest", "--cases", "40", "--fuzz-ops", "3000"]);
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).ends_with("0 mismatches\n"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dominion(&[
        "selftest", "--cases", "10", "--fuzz-ops", "1000", "--inject-fault", "--reproducer-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(3));
    let stdout = String::from_utf8_lossy(&bad.stdout);
    let line = stdout.lines().find(|l| l.trim_start().starts_with("reproducer:")).unwrap();
    let path = line.trim_start().trim_start_matches("reproducer:").trim();
    let repro = std::fs::read_to_string(path).unwrap();
    assert!(repro.contains("\"dimension\""));
}

#[test]
fn replay_trace_reports() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write(
        dir.path(),
        "t.trace",
        "# sample\nB 3 1,2 3,1 2,5\nU 0 7/2\nU 2 1\nM (-inf,3)x(1,inf) 0\nQ [1,3]x[0,7)\nD (-inf,3)x(1,inf)\nQ (-inf,inf)x(-inf,inf)\n",
    );
    let run = || dominion(&["replay-trace", "--input", &trace]);
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["queries"], 2);
    assert!(v["mismatch"].is_null());

    let broken = write(dir.path(), "bad.trace", "Q (-inf,inf)x(-inf,inf)\n");
    assert_eq!(dominion(&["replay-trace", "--input", &broken]).status.code(), Some(2));
}

#[test]
fn bench_reports_slope() {
    let out = dominion(&["bench", "--method", "dp", "--sizes", "10,20,40"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,method,backend,seconds");
    assert!(lines[1].starts_with("10,dp,float,"));
    assert!(lines.last().unwrap().starts_with("# loglog_slope="));
}
