use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn symqcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symqcs")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn level_dims(alg: &Value) -> Vec<u64> {
    alg["underlying"]["levels"].as_array().unwrap().iter().map(|l| l["dim"].as_u64().unwrap()).collect()
}

fn temp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("symqcs-{}-{name}", std::process::id()))
}

#[test]
fn tensor_algebra_dims() {
    let out = symqcs(&["build-algebra", "--tensor", "--dim", "2", "--cutoff", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(level_dims(&json(&out)), vec![1, 2, 4, 8, 16]);
}

#[test]
fn naive_commutativity_fails_at_1_1() {
    let path = temp("t2.json");
    let out = symqcs(&["build-algebra", "--tensor", "--dim", "2", "--cutoff", "4", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = symqcs(&["check", "--commutative", "--naive", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["passed"], false);
    assert_eq!(r["violations"][0]["cell"], serde_json::json!([1, 1]));
    let out = symqcs(&["check", "--commutative", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_file(path).ok();
}

#[test]
fn proj_laws_on_monomial_family() {
    let out = symqcs(&["proj", "laws", "--ring", "Q[x,y]", "--ideals", "x,y", "--family", "monomial"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let laws = r["laws"].as_array().unwrap();
    assert!(laws.len() >= 3);
    assert!(laws.iter().all(|l| l["status"] == "verified" && l["family_size"] == 3));
}

#[test]
fn reports_are_reproducible() {
    let args = ["check", "--flatness", "--tensor", "--cutoff", "3", "--trials", "6", "--seed", "7"];
    let a = symqcs(&args);
    let b = symqcs(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = symqcs(&["suite", "7", "--seed", "3"]);
    let b = symqcs(&["suite", "7", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_1() {
    assert_eq!(symqcs(&["build-algebra"]).status.code(), Some(1));
    assert_eq!(symqcs(&["build-algebra", "--ring", "Q[x"]).status.code(), Some(1));
    assert_eq!(symqcs(&["ideal", "closure", "--ring", "Q[x]", "--gens", "z"]).status.code(), Some(1));
    assert_eq!(symqcs(&["build-algebra", "--tensor", "--field", "F4"]).status.code(), Some(1));
    assert_eq!(symqcs(&["suite", "9"]).status.code(), Some(1));
    assert_eq!(symqcs(&["check", "--axioms", "--algebra", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn dimension_cap_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_symqcs"))
        .args(["build-algebra", "--sym-group", "--cutoff", "5"])
        .env("SYMQCS_MAX_DIM", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the cap"));
}

#[test]
fn verdicts_map_to_exit_codes() {
    assert_eq!(symqcs(&["ideal", "prime", "--ring", "Q[x,y]", "--gens", "x"]).status.code(), Some(0));
    let out = symqcs(&["ideal", "prime", "--ring", "Q[x,y]", "--gens", "x*y"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["verdict"]["witness"].is_array());
    assert_eq!(symqcs(&["torsion", "closed", "--ring", "Q[x]", "--cutoff", "6", "--quotient", "x"]).status.code(), Some(2));
    assert_eq!(symqcs(&["torsion", "test", "--ring", "Q[x]", "--cutoff", "6"]).status.code(), Some(2));
    assert_eq!(symqcs(&["torsion", "test", "--ring", "Q[x]", "--cutoff", "6", "--tail", "3"]).status.code(), Some(0));
}

#[test]
fn ideals_and_fields() {
    let out = symqcs(&["ideal", "product", "--tensor", "--cutoff", "4", "--left", "x", "--right", "y"]);
    let closure = symqcs(&["ideal", "closure", "--tensor", "--cutoff", "4", "--gens", "x*y"]);
    assert_eq!(json(&out)["dims"], json(&closure)["dims"]);
    let out = symqcs(&["ideal", "closure", "--sym-group", "--cutoff", "3", "--gens", "[1]"]);
    assert_eq!(json(&out)["dims"], serde_json::json!([0, 1, 2, 6]));
    let out = symqcs(&["ideal", "closure", "--ring", "Q[x,y]", "--field", "F5", "--gens", "2*x + y"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dims"], serde_json::json!([0, 1, 2, 3, 4]));
}

#[test]
fn reconstruction_and_sections() {
    let out = symqcs(&["reconstruct", "uv-identity", "--ring", "Q[x,y]", "--suspension", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["identity"], true);
    let out = symqcs(&["reconstruct", "a-map-cokernel", "--ring", "Q[x]", "--n", "1"]);
    assert_eq!(json(&out)["cokernel_dims"], serde_json::json!([1, 0, 0, 0, 0]));
    let out = symqcs(&["proj", "sections", "--ring", "Q[x,y]", "--f", "x"]);
    assert_eq!(json(&out)["generators"][0]["fraction"], "y/x");
    let out = symqcs(&["proj", "sections", "--ring", "Q[x,y]", "--f", "x, y"]);
    assert_eq!(out.status.code(), Some(0));
    let out = symqcs(&["proj", "pn-embedding", "--dim", "2", "--cutoff", "3"]);
    assert_eq!(json(&out)["data"]["quotient_dims"], serde_json::json!([1, 2, 3, 4]));
}

#[test]
fn module_round_trip() {
    let path = temp("f1.json");
    let out = symqcs(&["build-module", "--ring", "Q[x,y]", "--cutoff", "3", "--free", "1", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let p = path.to_str().unwrap();
    assert_eq!(symqcs(&["check", "--axioms", "--ring", "Q[x,y]", "--cutoff", "3", "--module", p]).status.code(), Some(0));
    assert_eq!(symqcs(&["check", "--adjunction", "--ring", "Q[x,y]", "--cutoff", "3", "--module", p]).status.code(), Some(0));
    std::fs::remove_file(path).ok();
}

#[test]
fn suites_are_single_commands() {
    let out = symqcs(&["suite", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("criterion 8: PASS"));
    let out = symqcs(&["suite", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn module_from_stdin() {
    let built = symqcs(&["build-module", "--ring", "Q[x]", "--cutoff", "8", "--free", "0"]);
    assert_eq!(built.status.code(), Some(0));
    let mut child = Command::new(env!("CARGO_BIN_EXE_symqcs"))
        .args(["torsion", "closed", "--ring", "Q[x]", "--cutoff", "8", "--n-max", "4", "--module", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(&built.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["closed"], true);
}
