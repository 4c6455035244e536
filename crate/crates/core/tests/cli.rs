use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn transvector(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transvector"))
        .args(args)
        .env("TRANSVECTOR_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn check_on_reflective_pair_succeeds() {
    let o = transvector(&["check", "--space", "su21", "--pair", "real-form", "--samples", "8", "--normals", "2"]);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["summary"]["status"], 0);
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn counterexample_normal_exits_one_with_witness() {
    let s = fixture("sl3r_line.json");
    let o = transvector(&["verify", "--space", "sl3r", "--s", s.to_str().unwrap(), "--X", "bad", "--samples", "8"]);
    assert_eq!(status(&o), 1);
    let v = json(&o);
    let cond = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "condition").unwrap();
    assert_eq!(cond["passed"], false);
    assert!(cond["details"]["verdict"]["witness"].is_object());
}

#[test]
fn input_errors_exit_two() {
    let o = transvector(&["catalog", "--algebra", fixture("sl2r_bad.alg").to_str().unwrap()]);
    assert_eq!(status(&o), 2);
    let v = json(&o);
    assert!(v["error"].as_str().unwrap().contains("Jacobi"));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.alg");
    std::fs::write(&empty, "").unwrap();
    let o = transvector(&["catalog", "--algebra", empty.to_str().unwrap()]);
    assert_eq!(status(&o), 2);
    assert!(json(&o)["error"].as_str().unwrap().contains(":1:1:"));

    assert_eq!(status(&transvector(&["check", "--space", "su21", "--pair", "nope"])), 2);
    assert_eq!(status(&transvector(&["check", "--space", "sp42"])), 2);
    assert_eq!(status(&transvector(&["frobnicate"])), 2);
    assert_eq!(status(&transvector(&["construct", "--space", "su21", "--pair", "real-form", "--format", "obj"])), 2);
}

#[test]
fn numerical_breakdown_exits_three() {
    let o = transvector(&["verify", "--space", "su21", "--pair", "real-form", "--K", "1", "--samples", "4"]);
    assert_eq!(status(&o), 3);
    assert!(json(&o)["error"].as_str().unwrap().contains("truncation"));
}

#[test]
fn file_algebras_with_complex_entries() {
    let o = transvector(&["catalog", "--algebra", fixture("su11.alg").to_str().unwrap()]);
    assert_eq!(status(&o), 0);
    let o = transvector(&["catalog", "--algebra", fixture("sl2r.alg").to_str().unwrap()]);
    assert_eq!(status(&o), 0);
    assert_eq!(json(&o)["checks"][0]["details"]["dim_p"], 2);
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = transvector(&["lemma", "--space", "su21", "--pair", "complex-hyperplane", "--samples", "6", "--seed", "3", "-o", p.to_str().unwrap()]);
        assert_eq!(status(&o), 0);
        assert!(o.stdout.is_empty());
    }
    let strip = |p: &PathBuf| {
        let mut v: Value = serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap();
        v["wall_time_ms"] = Value::Null;
        v["config"]["output"] = Value::Null;
        serde_json::to_vec(&v).unwrap()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn construct_exports_point_cloud() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cloud.ply");
    let o = transvector(&[
        "construct", "--space", "su21", "--pair", "complex-hyperplane", "--t-steps", "2", "--y-steps", "2",
        "--export", out.to_str().unwrap(), "--format", "ply",
    ]);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("element vertex 8\n"));
}
