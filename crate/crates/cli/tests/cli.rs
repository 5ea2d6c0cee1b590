use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_schur-lattice"));
    c.env_remove("SCHUR_LATTICE_CACHE");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn schema() -> JSONSchema {
    let text =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")).unwrap();
    JSONSchema::compile(&serde_json::from_str(&text).unwrap()).expect("schema compiles")
}

fn assert_valid(v: &Value) {
    let s = schema();
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    panic!("schema violations: {msgs:#?}");
}

fn classes(v: &Value, method: &str) -> usize {
    v["fix"][method]["count"].as_u64().unwrap() as usize
}

#[test]
fn hooks_and_cores() {
    let out = run(&["hooks", "--lambda", "2", "--p", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "hooks [2,1]\ncore=false\n");
    let (v, _) = json(&["hooks", "--lambda", "2", "--p", "3"]);
    assert_eq!(v["core"], true);
    let (v, _) = json(&["hooks", "--lambda", "2,1", "--p", "0"]);
    assert_eq!(v["core"], true);
    assert_eq!(v["hooks"], serde_json::json!([[3, 1], [1]]));
}

#[test]
fn dimension_and_rho() {
    assert_eq!(String::from_utf8(run(&["dim", "--n", "3", "--lambda", "2,1"]).stdout).unwrap(), "8\n");
    let (v, code) = json(&["rho", "--n", "2", "--lambda", "2", "--p", "5", "--matrix", "1,0;0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["matrix"], serde_json::json!([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]));
    assert_eq!(run(&["rho", "--n", "2", "--lambda", "2", "--p", "5", "--matrix", "1,0"]).status.code(), Some(2));
}

#[test]
fn fix_two_by_two_symmetric_square() {
    let (v, code) = json(&["fix", "--n", "2", "--lambda", "2", "--p", "3"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(classes(&v, "bfs"), 1);
    assert_eq!(classes(&v, "polytrope"), 1);
    assert_eq!(v["fix"]["agreement"]["equal"], true);
    assert_eq!(v["residue"]["spans_end"], true);

    let (v, code) = json(&["fix", "--n", "2", "--lambda", "2", "--p", "2"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["order"]["exponent_profile"]["entries"], serde_json::json!([[0, 1, 0], [0, 0, 0], [0, 1, 0]]));
    assert_eq!(v["fix"]["polytrope"]["points"], serde_json::json!([[0, 0, 0], [1, 0, 1]]));
    assert_eq!(classes(&v, "bfs"), 4);
    assert_eq!(v["fix"]["agreement"]["polytrope_within_bfs"], true);
    assert_eq!(v["residue"]["spans_end"], false);
}

#[test]
fn equal_characteristic_family_is_unbounded() {
    let (v, code) =
        json(&["fix", "--n", "2", "--lambda", "2", "--field", "laurent", "--q", "2", "--realization", "schur"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["order"]["full_rank"], false);
    assert_eq!(v["fix"]["polytrope"]["bounded"], false);
    assert_eq!(v["fix"]["bfs"], Value::Null);
    assert_eq!(v["fix"]["middle_family"]["invariant"], serde_json::json!(vec![true; 6]));
}

#[test]
fn method_selection() {
    let (v, _) = json(&["fix", "--n", "2", "--lambda", "2", "--p", "3", "--method", "bfs"]);
    assert_eq!(v["fix"]["polytrope"], Value::Null);
    assert_eq!(v["fix"]["agreement"], Value::Null);
    assert_valid(&v);
}

#[test]
fn order_and_irreducible_commands() {
    let (v, code) = json(&["order", "--n", "3", "--lambda", "2,1", "--p", "2"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    assert_eq!(v["order"]["rank"], 64);
    assert_eq!(v["fix"], Value::Null);
    let (v, _) = json(&["irreducible", "--n", "3", "--lambda", "2,1", "--p", "2"]);
    assert_valid(&v);
    assert_eq!(v["residue"]["spans_end"], true);
    assert_eq!(v["residue"]["invariant_subspaces"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["fix", "--n", "2", "--lambda", "2,x", "--p", "2"]).status.code(), Some(2));
    assert_eq!(run(&["fix", "--n", "2", "--lambda", "2", "--p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["fix", "--n", "2", "--lambda", "1,1,1", "--p", "2"]).status.code(), Some(2));
    let (v, code) = json(&["fix", "--n", "3", "--lambda", "3", "--p", "2", "--cap-N", "5"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "cap_exceeded");
    assert_valid(&v);
    let (v, code) = json(&["sample", "--n", "2", "--lambda", "2", "--p", "3", "--precision", "0"]);
    assert_eq!(code, 2);
    assert_valid(&v);
}

#[test]
fn sampling_is_deterministic() {
    let args =
        ["--json", "sample", "--n", "2", "--lambda", "2", "--p", "3", "--count", "2000", "--words", "3", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_valid(&v);
    assert_eq!(v["invariance"]["exact_invariant"], true);
    assert_eq!(v["samples"].as_array().unwrap().len(), 3);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--json", "fix", "--n", "3", "--lambda", "2", "--p", "2", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("scan.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn empty_scan() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "");
    let (v, code) = json(&["scan", &cfg]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!([]));
    assert_valid(&v);
}

#[test]
fn scan_records_per_case_caps_and_keeps_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[caps]
dim = 6

[[case]]
n = 3
lambda = "3"
field = "padic"
p = 2

[[sweep]]
degrees = [1, 2]
n = [2, 3]
field = "padic"
primes = [3]
core_only = true
"#,
    );
    let (a, code) = json(&["scan", &cfg, "--workers", "1"]);
    assert_eq!(code, 0);
    assert_valid(&a);
    let reports = a.as_array().unwrap();
    assert_eq!(reports[0]["error"]["kind"], "cap_exceeded");
    assert!(reports[1..].iter().all(|r| r["error"].is_null() && r["core"] == true));
    let (b, _) = json(&["scan", &cfg, "--workers", "3"]);
    assert_eq!(a, b);
}

#[test]
fn invalid_scan_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[[case]]\nn = 2\n");
    assert_eq!(run(&["scan", &cfg]).status.code(), Some(2));
    assert_eq!(run(&["scan", "/nonexistent/scan.toml"]).status.code(), Some(2));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--json", "fix", "--n", "3", "--lambda", "2,1", "--p", "3"];
    let first = bin().args(args).env("SCHUR_LATTICE_CACHE", dir.path()).output().unwrap();
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files.len(), 1, "{files:?}");
    let second = bin().args(args).env("SCHUR_LATTICE_CACHE", dir.path()).output().unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, run(&args).stdout);
}
