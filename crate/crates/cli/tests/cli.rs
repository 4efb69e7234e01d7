use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn olpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_olpa")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("olpa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn witness_dot_has_one_final_state() {
    let o = olpa(&["witness", "--n", "2", "--k", "1", "--l", "0", "--format", "dot"]);
    assert!(o.status.success());
    let dot = stdout(&o);
    assert!(dot.contains("q2 [shape=doublecircle"));
    assert!(dot.contains("q1 [shape=circle"));
    assert!(dot.contains("__start -> q1"));
    assert_eq!(dot.matches(" -> ").count(), 5);
}

#[test]
fn witness_json_for_a_pair() {
    let o = olpa(&["witness", "--sizes", "2,3", "--k", "1,1", "--l", "0,0", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dfas = v[0]["dfas"].as_array().unwrap();
    assert_eq!(dfas.len(), 2);
    for d in dfas {
        assert_eq!(d["alphabet"].as_array().unwrap().len(), 108);
    }
    assert_eq!(dfas[0]["finals"], serde_json::json!([1]));
    assert_eq!(dfas[1]["finals"], serde_json::json!([2]));
}

#[test]
fn witness_single_state() {
    let o = olpa(&["witness", "--n", "1", "--k", "1", "--l", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let d = &v[0]["dfas"][0];
    assert_eq!(d["states"], 1);
    assert_eq!(d["finals"], serde_json::json!([0]));
}

#[test]
fn witness_sweep_and_errors() {
    let o = olpa(&["witness", "--n", "3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
    let o = olpa(&["witness", "--n", "3", "--k", "sweep", "--l", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(olpa(&["witness", "--n", "3", "--k", "5", "--l", "0"]).status.code(), Some(2));
    assert_eq!(olpa(&["witness", "--n", "2", "--k", "1,1", "--l", "0"]).status.code(), Some(2));
    assert_eq!(olpa(&["witness"]).status.code(), Some(2));
}

#[test]
fn sc_reports_known_maxima() {
    let o = olpa(&["sc", "(rev (in 0))", "--sizes", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max: 8"));
    let o = olpa(&["sc", "(star (in 0))", "--sizes", "4"]);
    assert!(stdout(&o).contains("max: 12"));
    let o = olpa(&["sc", "(or (in 0) (in 1))", "--sizes", "2,3", "--jobs", "2"]);
    assert!(stdout(&o).contains("max: 6"));
}

#[test]
fn sc_warns_on_nonuniform_primitives() {
    let o = olpa(&["sc", "(half (in 0))", "--sizes", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max: 2"));
    assert!(stderr(&o).contains("warning: half is not uniform"));
    let o = olpa(&["sc", "(rev (in 0))", "--sizes", "2"]);
    assert!(!stderr(&o).contains("warning"));
}

#[test]
fn sc_errors_and_caps() {
    let o = olpa(&["sc", "(rev (in 0)", "--sizes", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("offset"));
    assert_eq!(olpa(&["sc", "(concat (in 0) (in 1))", "--sizes", "2"]).status.code(), Some(2));
    assert_eq!(olpa(&["sc", "(in 0)", "--sizes", "4,4"]).status.code(), Some(3));
    assert!(olpa(&["sc", "(in 0)", "--sizes", "5"]).status.success());
    assert!(olpa(&["sc", "(in 0)", "--sizes", "2,2", "--max-letters", "16"]).status.success());
}

#[test]
fn sc_partial_banner() {
    let o = Command::new(env!("CARGO_BIN_EXE_olpa"))
        .args(["sc", "(rev (in 0))", "--sizes", "3"])
        .env("OLPA_MAX_SUBSETS", "3")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("PARTIAL"));
}

#[test]
fn sc_json_is_deterministic() {
    let a = scratch("a.json");
    let b = scratch("b.json");
    for (path, jobs) in [(&a, "1"), (&b, "2")] {
        let o = olpa(&["sc", "(star (in 0))", "--sizes", "3", "--format", "json", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["max_value"], 6);
    assert_eq!(v["entries"].as_array().unwrap().len(), 6);
}

#[test]
fn oracle_runs() {
    let o = olpa(&["oracle", "(half (in 0))", "--sizes", "3", "--sigma", "2", "--mode", "all-dfas", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_value"].as_u64().unwrap() >= 3);
    assert_eq!(v["achievers"][0]["states"], 3);
    let o = olpa(&["oracle", "(rev (in 0))", "--sizes", "2", "--mode", "transformation-subsets"]);
    assert!(stdout(&o).contains("max: 4"));
    let o = olpa(&["oracle", "(star (in 0))", "--sizes", "2", "--sigma", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_value"].as_u64().unwrap() <= 3);
    let o = olpa(&["oracle", "(in 0)", "--sizes", "3", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn uniformity_verdicts() {
    let o = olpa(&["uniformity", "(star (not (star (in 0))))"]);
    assert!(stdout(&o).starts_with("no-counterexample after 200 trials"));
    let o = olpa(&["uniformity", "(in 0)"]);
    assert!(stdout(&o).starts_with("no-counterexample"));
    let o = olpa(&["uniformity", "(lquo (in 1) (in 0))"]);
    let text = stdout(&o);
    assert!(text.starts_with("counterexample at trial 0"));
    let json_start = text.find('{').unwrap();
    let v: Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(v["letter_map"], serde_json::json!([1, 1]));
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_suites() {
    for suite in ["reversal", "star", "boolean", "nonuniform"] {
        let o = olpa(&["verify", suite]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
    let o = olpa(&["verify", "reversal"]);
    assert!(stdout(&o).contains("rev max n=1"));
    assert_eq!(olpa(&["verify", "bogus"]).status.code(), Some(2));
}

#[test]
fn export_round_trips() {
    let src = scratch("dfa.json");
    std::fs::write(&src, r#"{"states":2,"alphabet":["a","b"],"initial":0,"finals":[1],"delta":[1,0,0,1]}"#).unwrap();
    let o = olpa(&["export", src.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), r#"{"states":2,"alphabet":["a","b"],"initial":0,"finals":[1],"delta":[1,0,0,1]}"#);
    let o = olpa(&["export", src.to_str().unwrap()]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph \"dfa\""));
    assert!(dot.contains("q2 [shape=doublecircle"));
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"states":1,"alphabet":1,"initial":0,"finals":[],"delta":[3]}"#).unwrap();
    assert_eq!(olpa(&["export", bad.to_str().unwrap()]).status.code(), Some(2));
}
