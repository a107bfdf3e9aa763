use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn facebound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facebound")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn rp3_round_trip_is_sharp() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "rp3.json");
    assert_eq!(facebound(&["construct", "--shape", "rp", "--dim", "3", "-o", &file]).status.code(), Some(0));
    let out = facebound(&["check-bound", "--input", &file]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["bound"], 8);
    assert_eq!(report["actual"], 8);
    assert_eq!(report["pass"], true);
}

#[test]
fn torus_bound_and_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "torus7.json");
    facebound(&["construct", "--shape", "torus7", "-o", &file]);
    let out = facebound(&["check-bound", "--input", &file]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["actual"], 14);
    let missing = path(dir.path(), "missing.json");
    assert_eq!(facebound(&["check-bound", "--input", &missing]).status.code(), Some(2));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "bad.json");
    std::fs::write(&file, r#"{"counts": [2, 1], "faces": {"1": [[0, 5]]}}"#).unwrap();
    assert_eq!(facebound(&["check-bound", "--input", &file]).status.code(), Some(2));
    std::fs::write(&file, "not json").unwrap();
    assert_eq!(facebound(&["cohomology", "--input", &file]).status.code(), Some(2));
    assert_eq!(facebound(&["signflip", "--group", "z3", "--rep", "sign", "--N", "2"]).status.code(), Some(2));
}

#[test]
fn cover_then_orbit_bound() {
    let dir = tempfile::tempdir().unwrap();
    let base = path(dir.path(), "torus7.json");
    let cover = path(dir.path(), "cover.json");
    facebound(&["construct", "--shape", "torus7", "-o", &base]);
    let out = facebound(&["cover", "--input", &base, "--basis", "-o", &cover]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["sheets"], 4);
    let out = facebound(&["check-theorem", "--input", &cover, "--rep", "sign"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["actual"], 14);
    assert_eq!(report["status"], "verified");
}

#[test]
fn crosspolytope_orbit_bound_and_cohomology() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "cp.json");
    facebound(&["construct", "--shape", "crosspolytope", "--dim", "3", "-o", &file]);
    let report = json(&facebound(&["check-theorem", "--input", &file, "--rep", "neg:2"]));
    assert_eq!((report["actual"].as_u64(), report["bound"].as_u64()), (Some(4), Some(4)));
    let coh = json(&facebound(&["cohomology", "--input", &file]));
    assert_eq!(coh["betti"], serde_json::json!([1, 0, 1]));
}

#[test]
fn signflip_and_translate_reports() {
    let out = facebound(&["signflip", "--group", "z2", "--rep", "sign", "--N", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["bound"], "3/1");
    assert_eq!(r["average"], "6/1");
    assert!(r["orbit_count"].as_u64().unwrap() <= 3);

    let out = facebound(&["claim2", "--group", "z2", "--N", "2", "--degree", "1", "--z", "0", "--c", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["hn_order"], 48);
    assert_eq!(r["incidence_average"], "1/6");
    assert!(r["found_h"].is_object());
}

#[test]
fn eg_and_bg_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let eg = path(dir.path(), "eg.json");
    let bg = path(dir.path(), "bg.json");
    facebound(&["construct", "--shape", "eg", "--group", "z3", "--dim", "1", "-o", &eg]);
    facebound(&["construct", "--shape", "bg", "--group", "z3", "--dim", "1", "-o", &bg]);
    let coh = json(&facebound(&["cohomology", "--input", &eg]));
    assert_eq!(coh["f_vector"], serde_json::json!([6, 9]));
    let coh = json(&facebound(&["cohomology", "--input", &bg]));
    assert_eq!(coh["f_vector"], serde_json::json!([2, 3]));
}
