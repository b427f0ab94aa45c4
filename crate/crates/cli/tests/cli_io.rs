//! End-to-end tests of the `netloc` binary: exit codes, JSON report
//! shape, and seed determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn netloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("netloc-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn circle_instance() -> PathBuf {
    write_file(
        "circle.json",
        r#"{
  "graph": {
    "vertices": ["a", "b"],
    "edges": [
      {"u": "a", "v": "b", "length": "1/2"},
      {"u": "b", "v": "a", "length": "1/2"}
    ]
  },
  "profile": ["0", "0", "3/10"]
}"#,
    )
}

fn line_instance() -> PathBuf {
    write_file(
        "line.json",
        r#"{
  "graph": {
    "vertices": ["a", "b"],
    "edges": [{"u": "a", "v": "b", "length": "1"}]
  },
  "profile": [
    {"edge": 0, "offset": "0"},
    {"edge": 0, "offset": "2/5"}
  ]
}"#,
    )
}

fn star_instance() -> PathBuf {
    write_file(
        "star.json",
        r#"{
  "graph": {
    "vertices": ["c", "u1", "u2", "u3"],
    "edges": [
      {"u": "c", "v": "u1", "length": "1"},
      {"u": "c", "v": "u2", "length": "1"},
      {"u": "c", "v": "u3", "length": "1"}
    ]
  },
  "profile": [{"vertex": "u1"}, {"vertex": "u2"}, {"vertex": "u3"}]
}"#,
    )
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout was not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn run_reports_the_tight_dictator_ratio() {
    let inst = circle_instance();
    let out = netloc(&["run", "--instance", inst.to_str().unwrap(), "--mechanism", "random-dictator"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["costs"]["sc_ratio"], "4/3");
    assert_eq!(v["costs"]["social_cost"], "2/5");
}

#[test]
fn run_reports_the_lrm_ratio_on_a_line() {
    let inst = line_instance();
    let out = netloc(&["run", "--instance", inst.to_str().unwrap(), "--mechanism", "lrm"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["costs"]["mc_ratio"], "3/2");
}

#[test]
fn sampling_is_seed_deterministic() {
    let inst = circle_instance();
    let args = [
        "run",
        "--instance",
        inst.to_str().unwrap(),
        "--mechanism",
        "hybrid",
        "--seed",
        "42",
    ];
    let a = stdout_json(&netloc(&args));
    let b = stdout_json(&netloc(&args));
    assert_eq!(a["sample"], b["sample"]);
    assert!(!a["sample"]["outcome"].is_null());
}

#[test]
fn parse_errors_exit_two() {
    let bad = write_file("bad.json", "{ not json");
    let out = netloc(&["run", "--instance", bad.to_str().unwrap(), "--mechanism", "lrm"]);
    assert_eq!(out.status.code(), Some(2));

    let missing = netloc(&["run", "--instance", "/nonexistent.json", "--mechanism", "lrm"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn topology_mismatch_exits_three() {
    let inst = circle_instance();
    let out = netloc(&["run", "--instance", inst.to_str().unwrap(), "--mechanism", "tree-median"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_sp_flags_the_star_coalition() {
    let inst = star_instance();
    let out = netloc(&[
        "verify-sp",
        "--instance",
        inst.to_str().unwrap(),
        "--mechanism",
        "random-dictator",
        "--resolution",
        "1/4",
        "--coalition",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["profitable"], true);
}

#[test]
fn verify_sp_passes_the_hybrid_on_a_circle() {
    let inst = circle_instance();
    let out = netloc(&[
        "verify-sp",
        "--instance",
        inst.to_str().unwrap(),
        "--mechanism",
        "hybrid",
        "--resolution",
        "1/50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["profitable"], false);
}

#[test]
fn verify_sp_single_agent_passes() {
    let inst = write_file(
        "single.json",
        r#"{
  "graph": {
    "vertices": ["a", "b"],
    "edges": [
      {"u": "a", "v": "b", "length": "1/2"},
      {"u": "b", "v": "a", "length": "1/2"}
    ]
  },
  "profile": ["1/3"]
}"#,
    );
    let out = netloc(&[
        "verify-sp",
        "--instance",
        inst.to_str().unwrap(),
        "--mechanism",
        "random-dictator",
        "--resolution",
        "1/20",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn budget_exhaustion_exits_four() {
    let inst = star_instance();
    let out = netloc(&[
        "verify-sp",
        "--instance",
        inst.to_str().unwrap(),
        "--mechanism",
        "random-dictator",
        "--resolution",
        "1/100",
        "--coalition",
        "3",
        "--budget",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v = stdout_json(&out);
    assert_eq!(v["partial"]["profitable"], false);
}

#[test]
fn lowerbound_trace_carries_the_formula() {
    let out = netloc(&[
        "lowerbound",
        "--m",
        "3",
        "--k",
        "2",
        "--n",
        "18",
        "--mechanism",
        "tree-center-lottery",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["formula_bound"], "5/12");
    assert_eq!(v["levels"].as_array().unwrap().len(), 3);
    assert_eq!(v["levels"][0]["closed_form"], "1/2");

    let small = netloc(&["lowerbound", "--m", "2", "--k", "1", "--n", "4", "--mechanism", "dictator"]);
    assert!(small.status.success());

    let bad = netloc(&["lowerbound", "--m", "3", "--k", "2", "--n", "10", "--mechanism", "dictator"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn gsp_circle_finds_a_witness() {
    let inst = circle_instance();
    let dev = write_file("dev.json", r#"["1/5", "1/5", "1/5"]"#);
    let out = netloc(&[
        "gsp-circle",
        "--instance",
        inst.to_str().unwrap(),
        "--deviation",
        dev.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["witness_index"].is_u64());
}

#[test]
fn table_runs_and_passes_with_small_trials() {
    let out = netloc(&["table", "--trials", "10", "--max-n", "5", "--seed", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let rows = v.as_array().unwrap();
    assert!(rows.len() >= 9);
    assert!(rows.iter().all(|r| r["pass"] == true));
}
