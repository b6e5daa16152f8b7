use std::path::Path;
use std::process::{Command, Output};

const HYPERBOLIC: &str = r#"{"algebra": {"type": "disc"},
 "map": {"moebius": {"a": [1, 0], "b": [0.5, 0], "c": [0.5, 0], "d": [1, 0]}},
 "weight": {"coeffs": [[-2, 0], [1, 0]]}}"#;

const T2: &str = r#"{"algebra": {"type": "endomorphism"},
 "map": {"blaschke": {"zeros": [[0, 0], [0, 0]]}},
 "weight": {"coeffs": [[0.5, 0], [-0.5, 0]]},
 "options": {"endomorphism": {"n_max": 4, "p_max": 4, "sample_grid": 128}}}"#;

const SINGLE_FACTOR: &str = r#"{"algebra": {"type": "endomorphism"},
 "map": {"blaschke": {"zeros": [[0, 0]]}}, "weight": {"coeffs": [[1, 0]]}}"#;

fn wcospec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wcospec"))
        .args(args)
        .env_remove("WCOSPEC_PROFILE")
        .output()
        .expect("spawn wcospec")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn analyze_then_plot() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "h.json", HYPERBOLIC);
    let report = dir.path().join("r.json");
    let out = wcospec(&["analyze", &spec, "-o", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(doc["report"]["case_tag"], "Prop7.1");
    assert_eq!(doc["fingerprint"].as_str().unwrap().len(), 64);

    let svg = dir.path().join("s.svg");
    let out = wcospec(&[
        "plot",
        report.to_str().unwrap(),
        "-o",
        svg.to_str().unwrap(),
        "--window=-4,4,-4,4",
        "--spectrum",
        "sigma",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
}

#[test]
fn classify_line() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "h.json", HYPERBOLIC);
    let out = wcospec(&["classify-map", &spec]);
    assert_eq!(out.status.code(), Some(0));
    let line = String::from_utf8(out.stdout).unwrap();
    assert!(line.starts_with("Hyperbolic"), "{line}");
}

#[test]
fn flagged_verify_still_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "t2.json", T2);
    let out = wcospec(&["verify", &spec]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FLAG"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"algebra": {"type": "disc"}}"#);
    assert_eq!(wcospec(&["analyze", &bad]).status.code(), Some(3));
    let unsupported = write(dir.path(), "one.json", SINGLE_FACTOR);
    let out = wcospec(&["analyze", &unsupported]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotCoveredByPaper"));
    assert_eq!(wcospec(&["analyze"]).status.code(), Some(3));
    assert_eq!(wcospec(&["analyze", "/nonexistent/spec.json"]).status.code(), Some(3));
}

#[test]
fn batch_reports_line_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = format!("{}\n\n{}\n{}\n", HYPERBOLIC.replace('\n', " "), "{", SINGLE_FACTOR.replace('\n', " "));
    let path = write(dir.path(), "in.jsonl", &input);
    let out = wcospec(&["batch", &path]);
    assert_eq!(out.status.code(), Some(3));
    let lines: Vec<serde_json::Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["report"]["case_tag"], "Prop7.1");
    assert_eq!(lines[1]["line"], 3);
    assert_eq!(lines[1]["error"]["code"], 3);
    assert_eq!(lines[2]["error"]["code"], 2);
}
