use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_witnesskit");

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(s) = stdin {
        pipe.write_all(s.as_bytes()).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: Option<&str>) -> String {
    let out = run(args, stdin);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("witnesskit-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn make_state(dir: &Scratch, kind: &str, m: usize) -> String {
    let path = dir.path(&format!("{kind}{m}.json"));
    ok(&["state", "make", "--kind", kind, "--qubits", &m.to_string(), "--out", &path], None);
    path
}

#[test]
fn piped_concurrence_of_ghz3() {
    let state = ok(&["state", "make", "--kind", "ghz", "--qubits", "3"], None);
    let v = json(&ok(&["concurrence", "-"], Some(&state)));
    assert!((f(&v["c_squared"]) - 0.75).abs() < 1e-12);
    let v = json(&ok(&["concurrence", "-", "--breakdown"], Some(&state)));
    assert_eq!(v["breakdown"]["ghz_terms"].as_object().unwrap().len(), 6);
    let v = json(&ok(&["concurrence", "-", "--normalization", "0.5"], Some(&state)));
    assert!((f(&v["c_squared"]) - 0.375).abs() < 1e-12);
}

#[test]
fn state_roundtrip_reloads() {
    let dir = Scratch::new("roundtrip");
    for kind in ["ghz", "w"] {
        let path = make_state(&dir, kind, 4);
        let v = json(&std::fs::read_to_string(&path).unwrap());
        assert_eq!(v["dims"], serde_json::json!([2, 2, 2, 2]));
        let norm: f64 = v["amplitudes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| f(&p[0]).powi(2) + f(&p[1]).powi(2))
            .sum();
        assert!((norm - 1.0).abs() < 1e-15);
        ok(&["concurrence", &path], None);
    }
}

#[test]
fn build_then_certify_through_a_pipe() {
    let dir = Scratch::new("certify");
    let ghz = make_state(&dir, "ghz", 3);
    let witness = ok(&["witness-build", &ghz, "--form", "canonical"], None);
    let v = json(&ok(&["certify", "-", "--target", &ghz], Some(&witness)));
    assert!((f(&v["min_product_expectation"]) - 0.25).abs() < 1e-6);
    assert!((f(&v["detection_value"]) + 0.25).abs() < 1e-12);
    assert_eq!(v["is_valid_witness"], Value::Bool(true));
    assert_eq!(v["detects_target"], Value::Bool(true));
    assert_eq!(v["argmin"].as_array().unwrap().len(), 3);

    let w = make_state(&dir, "w", 3);
    let witness = ok(&["witness-build", &w, "--form", "canonical"], None);
    let v = json(&ok(&["certify", "-", "--target", &w, "--samples", "200"], Some(&witness)));
    assert!((f(&v["min_product_expectation"]) - 2.0 / 9.0).abs() < 1e-6);
    assert!(f(&v["positivity_probe"]["worst"]) >= f(&v["min_product_expectation"]) - 1e-9);
}

#[test]
fn compare_canonical_and_operator_ghz3() {
    let dir = Scratch::new("compare");
    let ghz = make_state(&dir, "ghz", 3);
    let a = dir.path("canonical_ghz3.json");
    let b = dir.path("operator_ghz3.json");
    ok(&["witness-build", &ghz, "--form", "canonical", "--out", &a], None);
    ok(&["witness-build", &ghz, "--form", "operator", "--out", &b], None);
    let v = json(&ok(&["compare", &a, &b], None));
    assert!((f(&v["max_abs_diff"]) - 1.5).abs() < 1e-12);
    let at: Vec<(u64, u64)> = v["positions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["row"].as_u64().unwrap(), p["col"].as_u64().unwrap()))
        .collect();
    assert!(at.contains(&(0, 7)) && at.contains(&(7, 0)));
}

#[test]
fn evaluation_and_noise_threshold() {
    let dir = Scratch::new("eval");
    let w = make_state(&dir, "w", 3);
    let wit = dir.path("wit.json");
    ok(&["witness-build", &w, "--form", "canonical", "--out", &wit], None);
    let v = json(&ok(&["witness-eval", &wit, &w], None));
    assert!((f(&v["expectation"]) + 1.0 / 3.0).abs() < 1e-12);
    let v = json(&ok(&["noise-threshold", &wit, "--target", &w], None));
    assert!((f(&v["p_star"]) - 13.0 / 21.0).abs() < 1e-12);

    let density = r#"{"dims":[2,2,2],"matrix":[[[0.125,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]],[[0,0],[0.125,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0.125,0],[0,0],[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0.125,0],[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0],[0.125,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0],[0,0],[0.125,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0.125,0],[0,0]],[[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0.125,0]]]}"#;
    let v = json(&ok(&["witness-eval", &wit, "-"], Some(density)));
    // Tr(W I/8) = gamma - 1/8
    assert!((f(&v["expectation"]) - (2.0 / 3.0 - 0.125)).abs() < 1e-12);
}

#[test]
fn deterministic_reports() {
    let dir = Scratch::new("determinism");
    let w = make_state(&dir, "w", 4);
    let wit = dir.path("wit.json");
    ok(&["witness-build", &w, "--form", "canonical", "--out", &wit], None);
    let args = ["certify", wit.as_str(), "--target", w.as_str(), "--restarts", "12", "--seed", "42", "--samples", "50"];
    let a = ok(&args, None);
    let b = ok(&args, None);
    assert_eq!(a, b);
    let c = Command::new(BIN).args(args).env("WITNESSKIT_THREADS", "1").output().unwrap();
    assert_eq!(String::from_utf8(c.stdout).unwrap(), a);
}

#[test]
fn exit_codes_and_error_objects() {
    let dir = Scratch::new("errors");
    let out = run(&["state", "make", "--kind", "w", "--qubits", "13"], None);
    assert_eq!(out.status.code(), Some(2));
    let err = json(&String::from_utf8(out.stderr).unwrap());
    assert_eq!(err["code"], 2);
    assert!(err["message"].as_str().unwrap().contains("12"));

    let out = run(&["concurrence", "-"], Some("{\"dims\":[2],\"amplitudes\":[[1,0],[1,0]]}"));
    assert_eq!(out.status.code(), Some(2));

    let ghz = make_state(&dir, "ghz", 3);
    let psd = dir.path("psd.json");
    ok(&["witness-build", &ghz, "--form", "canonical", "--gamma", "1", "--out", &psd], None);
    let out = run(&["noise-threshold", &psd, "--target", &ghz], None);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(json(&String::from_utf8(out.stderr).unwrap())["error"], "NoDetection");

    let wit = dir.path("wit.json");
    ok(&["witness-build", &ghz, "--form", "canonical", "--out", &wit], None);
    let out = run(&["certify", &wit, "--target", &ghz, "--max-sweeps", "1", "--tolerance", "1e-300", "--restarts", "2"], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&String::from_utf8(out.stdout).unwrap())["converged"] == Value::Bool(false));

    let op = dir.path("op.json");
    let w = make_state(&dir, "w", 3);
    ok(&["witness-build", &w, "--form", "operator", "--out", &op], None);
    let out = run(&["certify", &op, "--target", &w], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&String::from_utf8(out.stderr).unwrap())["error"], "NotHermitian");
    let herm = ok(&["witness-build", &w, "--form", "operator", "--hermitize"], None);
    assert_eq!(json(&herm)["form"], "hermitized_operator_form");

    let out = run(&["certify", "-", "--target", "-"], Some("{}"));
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(BIN)
        .args(["concurrence", &ghz])
        .env("WITNESSKIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    assert!(!Path::new(&dir.path("missing.json")).exists());
    assert_eq!(run(&["concurrence", &dir.path("missing.json")], None).status.code(), Some(2));
}

#[test]
fn pretty_summaries() {
    let state = ok(&["state", "make", "--kind", "w", "--qubits", "3"], None);
    let text = ok(&["concurrence", "-", "--pretty"], Some(&state));
    assert!(text.starts_with("C^2 = 0.666"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}
