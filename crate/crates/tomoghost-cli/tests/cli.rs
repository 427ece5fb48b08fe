//! End-to-end checks of the binary: exit codes, envelope shape, schema
//! conformance of each payload, and byte-for-byte determinism.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tomoghost"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn tomoghost")
}

fn run_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "args {:?}, stderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn assert_matches_schema(instance: &Value, schema_file: &str) {
    let text = std::fs::read_to_string(schema_dir().join(schema_file))
        .unwrap_or_else(|e| panic!("read {schema_file}: {e}"));
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_file} violations: {errors:?}");
}

fn envelope_payload(v: &Value) -> &Value {
    assert_matches_schema(v, "envelope.schema.json");
    &v["payload"]
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("tomoghost-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn paper_example_roundtrip_and_schemas() {
    let env = run_ok(&["construct", "paper-example"]);
    let payload = envelope_payload(&env);
    assert_matches_schema(payload, "ghost_pair.schema.json");
    assert_eq!(payload["verified"], Value::Bool(true));

    let pair_path = tmp_file("pair.json", &env.to_string());
    let verify = run_ok(&["verify-ghost", "--pair", pair_path.to_str().unwrap()]);
    let vp = envelope_payload(&verify);
    assert_matches_schema(vp, "verify_ghost.schema.json");
    assert_eq!(vp["verified"], Value::Bool(true));
    assert_eq!(vp["size"], Value::from(6));
    std::fs::remove_file(pair_path).ok();
}

#[test]
fn hypercube_payload_schema() {
    let dirs = tmp_file(
        "hyperdirs.json",
        r#"{"d":2,"directions":[[1,0],[0,1],[1,1]]}"#,
    );
    let env = run_ok(&["construct", "hypercube", "--directions", dirs.to_str().unwrap()]);
    let p = envelope_payload(&env);
    assert_matches_schema(p, "hypercube_ghost.schema.json");
    assert_eq!(p["verified"], Value::Bool(true));
    std::fs::remove_file(dirs).ok();
}

#[test]
fn polygon_certificate_schema() {
    let env = run_ok(&["construct", "polygon", "--m", "4"]);
    assert_matches_schema(envelope_payload(&env), "polygon_certificate.schema.json");
}

#[test]
fn select_directions_schema() {
    let env = run_ok(&["select-directions", "--m", "8", "--d", "2"]);
    let p = envelope_payload(&env);
    assert_matches_schema(p, "direction_selection.schema.json");
    assert_eq!(p["q_used"], Value::from(4));
}

#[test]
fn coprime_census_schema() {
    let env = run_ok(&["coprime-census", "--p", "4", "--d", "2"]);
    let p = envelope_payload(&env);
    assert_matches_schema(p, "coprime_census.schema.json");
    assert_eq!(p["count"], Value::from(11));
}

#[test]
fn count_lines_schema_and_values() {
    let env = run_ok(&["count-lines", "--direction", "1,1", "--n", "3", "--d", "2"]);
    let p = envelope_payload(&env);
    assert_matches_schema(p, "count_lines.schema.json");
    assert_eq!(p["exact"], Value::from(5));
    assert_eq!(p["lemma1_bound"], Value::from(6));
}

#[test]
fn xray_schema() {
    let pts = tmp_file("xpts.json", r#"{"d":2,"points":[[0,0],[1,1],[2,0]]}"#);
    let env = run_ok(&["xray", "--points", pts.to_str().unwrap(), "--direction", "1,0"]);
    let p = envelope_payload(&env);
    assert_matches_schema(p, "xray.schema.json");
    let total: i64 = p["lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["count"].as_i64().unwrap())
        .sum();
    assert_eq!(total, 3);
    std::fs::remove_file(pts).ok();
}

#[test]
fn bounds_certificate_and_scan_schemas() {
    let env = run_ok(&["bounds", "certificate", "--m", "3", "--d", "2", "--epsilon", "1/2"]);
    assert_matches_schema(envelope_payload(&env), "pigeonhole_report.schema.json");

    let env = run_ok(&[
        "bounds", "scan", "--d", "2", "--epsilon", "1/2", "--m-from", "3", "--m-to", "6",
    ]);
    let p = envelope_payload(&env);
    assert_matches_schema(p, "scan_table.schema.json");
    assert_eq!(p["n_nondecreasing"], Value::Bool(true));
}

#[test]
fn search_commands_schemas() {
    let dirs = tmp_file("sdirs.json", r#"{"d":2,"directions":[[1,0],[0,1],[1,1]]}"#);
    let env = run_ok(&[
        "search", "min-ghost", "--directions", dirs.to_str().unwrap(),
        "--grid", "4x4", "--offset", "0,0", "--kmax", "4",
    ]);
    let p = envelope_payload(&env);
    assert_matches_schema(p, "search_outcome.schema.json");
    assert_eq!(p["minimal_size"], Value::from(3));

    let pts = tmp_file("spts.json", r#"{"d":2,"points":[[0,0],[1,1]]}"#);
    let env = run_ok(&[
        "search", "unique", "--points", pts.to_str().unwrap(),
        "--directions", dirs.to_str().unwrap(), "--grid", "4x4", "--offset", "0,0",
    ]);
    assert_matches_schema(envelope_payload(&env), "uniqueness_report.schema.json");

    let square = tmp_file("sq.json", r#"{"d":2,"points":[[0,0],[1,0],[1,1],[0,1]]}"#);
    let hv = tmp_file("hv.json", r#"{"d":2,"directions":[[1,0],[0,1]]}"#);
    let env = run_ok(&[
        "search", "ugon", "--points", square.to_str().unwrap(),
        "--directions", hv.to_str().unwrap(),
    ]);
    let p = envelope_payload(&env);
    assert_matches_schema(p, "ugon_report.schema.json");
    assert_eq!(p["is_ugon"], Value::Bool(true));
    for f in [dirs, pts, square, hv] {
        std::fs::remove_file(f).ok();
    }
}

#[test]
fn pte_pipeline_schemas() {
    let pair = run_ok(&["construct", "paper-example"]);
    let pair_path = tmp_file("ppair.json", &pair.to_string());
    let sol_env = run_ok(&["pte", "from-ghost", "--pair", pair_path.to_str().unwrap()]);
    let sol = envelope_payload(&sol_env);
    assert_matches_schema(sol, "pte_solution.schema.json");
    assert_eq!(sol["degree"], Value::from(4));

    let sol_path = tmp_file("psol.json", &sol_env.to_string());
    let ver = run_ok(&["pte", "verify", "--solution", sol_path.to_str().unwrap()]);
    let vp = envelope_payload(&ver);
    assert_matches_schema(vp, "pte_verification.schema.json");
    assert_eq!(vp["valid"], Value::Bool(true));

    let red = run_ok(&["pte", "reduce", "--solution", sol_path.to_str().unwrap(), "--alpha", "1,6"]);
    let rp = envelope_payload(&red);
    assert_matches_schema(rp, "pte_solution.schema.json");
    assert_eq!(rp["r"], Value::from(1));
    for f in [pair_path, sol_path] {
        std::fs::remove_file(f).ok();
    }
}

#[test]
fn exit_code_invalid_input() {
    let out = run(&["verify-ghost", "--pair", "/nonexistent/pair.json"]);
    assert_eq!(out.status.code(), Some(2));
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["status"], Value::from("invalid-input"));
    assert!(!env["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn exit_code_inconclusive_on_budget() {
    let dirs = tmp_file("bdirs.json", r#"{"d":2,"directions":[[1,0],[0,1],[1,1]]}"#);
    let out = bin()
        .args([
            "search", "min-ghost", "--directions", dirs.to_str().unwrap(),
            "--grid", "4x4", "--offset", "0,0", "--kmax", "4", "--budget", "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["status"], Value::from("inconclusive"));
    std::fs::remove_file(dirs).ok();
}

#[test]
fn output_is_deterministic() {
    let a = run(&["construct", "paper-example"]);
    let b = run(&["construct", "paper-example"]);
    assert_eq!(a.stdout, b.stdout);

    let c = run(&["bounds", "certificate", "--m", "3", "--d", "2", "--epsilon", "1/2"]);
    let d = run(&["bounds", "certificate", "--m", "3", "--d", "2", "--epsilon", "1/2"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("tomoghost-out-{}.json", std::process::id()));
    let out = run(&["construct", "paper-example", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let env: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(env["status"], Value::from("ok"));
    std::fs::remove_file(path).ok();
}
