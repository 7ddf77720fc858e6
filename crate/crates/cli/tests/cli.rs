use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn artinian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_artinian")).args(args).output().expect("spawn")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = artinian(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn gen_square_zero() {
    let out = artinian(&["gen", "--e", "2", "--s", "1", "--c", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# artinian gen"));
    for g in ["gen x^2", "gen x*y", "gen y^2"] {
        assert!(text.contains(g), "{text}");
    }
}

#[test]
fn gen_is_deterministic() {
    let a = artinian(&["gen", "--e", "4", "--s", "3", "--c", "2", "--seed", "7"]);
    let b = artinian(&["gen", "--e", "4", "--s", "3", "--c", "2", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = artinian(&["gen", "--e", "4", "--s", "3", "--c", "2", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(artinian(&["gen", "--e", "3", "--s", "2", "--c", "99"]).status.code(), Some(2));
    assert_eq!(artinian(&["gen", "--e", "3", "--s", "2", "--c", "0"]).status.code(), Some(2));
    assert_eq!(artinian(&["analyze"]).status.code(), Some(2));
    assert_eq!(artinian(&[]).status.code(), Some(2));
    assert_eq!(artinian(&["verify", "--e", "3", "--s", "3", "--c", "1", "--prime", "32004"]).status.code(), Some(2));
}

#[test]
fn analyze_square_zero() {
    let (code, v) = json(&["analyze", "--e", "2", "--s", "1", "--c", "2"]);
    assert_eq!(code, 0);
    let inv = &v["invariants"];
    assert_eq!(inv["hilbert"], serde_json::json!([1, 2]));
    assert_eq!(inv["v"], 2);
    assert_eq!(inv["compressed"], true);
    assert_eq!(inv["case"], "golod case s ≤ 2v−3");
    assert_eq!(inv["socle_polynomial"], "2*z");
}

#[test]
fn analyze_classifies_five_variables() {
    let (code, v) = json(&["analyze", "--e", "5", "--s", "5", "--c", "2", "--seed", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["invariants"]["case"], "main theorem case s = 2v−1");
    assert_eq!(v["invariants"]["socle_polynomial"], "2*z^5");
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true), "{checks:?}");
}

#[test]
fn verify_report_schema_and_determinism() {
    let args = ["verify", "--e", "3", "--s", "5", "--c", "1", "--seed", "3"];
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    for key in ["config", "invariants", "betti_Q", "nu_ranks", "phi_kernel", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for c in v["checks"].as_array().unwrap() {
        for key in ["name", "anchor", "pass", "detail"] {
            assert!(c.get(key).is_some());
        }
        assert!(!c["anchor"].as_str().unwrap().is_empty());
    }
    assert_eq!(v["phi_kernel"]["dims"], serde_json::json!([0, 1, 0, 1]));
    let a = artinian(&[&args[..], &["--format", "json"]].concat());
    let b = artinian(&[&args[..], &["--format", "json"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_five_variable_instance() {
    let out = artinian(&["verify", "--e", "5", "--s", "5", "--c", "2", "--seed", "1"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("0 failed"));
}

#[test]
fn non_compressed_input_warns() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "nc.ring", "p 32003\nvars x y z\ngen x^2\ngen y^2\ngen z^3\ngen x*y*z\n");
    let (code, v) = json(&["verify", "--in", &p]);
    assert_eq!(code, 0);
    assert_eq!(v["invariants"]["compressed"], false);
    let w = v["warnings"][0].as_str().unwrap();
    assert!(w.contains("compressed: false"), "{w}");
}

#[test]
fn corrupted_or_infinite_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.ring", "p 32003\nvars x y\ngen x^2 +* y\n");
    let out = artinian(&["verify", "--in", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
    let inf = write(dir.path(), "inf.ring", "p 32003\nvars x y\ngen x^2\n");
    let out = artinian(&["analyze", "--in", &inf]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--cap"));
    let missing = dir.path().join("none.ring").display().to_string();
    assert_eq!(artinian(&["analyze", "--in", &missing]).status.code(), Some(2));
}

#[test]
fn gen_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ring = dir.path().join("r.ring").display().to_string();
    assert_eq!(artinian(&["gen", "--e", "3", "--s", "5", "--c", "2", "--out", &ring]).status.code(), Some(0));
    let (code, from_file) = json(&["analyze", "--in", &ring]);
    assert_eq!(code, 0);
    let (_, direct) = json(&["analyze", "--e", "3", "--s", "5", "--c", "2"]);
    assert_eq!(from_file["invariants"], direct["invariants"]);
    assert_eq!(from_file["invariants"]["case"], "golod case s ≤ 2v−3");
}

#[test]
fn table_output_lists_checks() {
    let out = artinian(&["analyze", "--e", "3", "--s", "3", "--c", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS  length_bound"), "{text}");
    assert!(text.contains("checks run"));
}
