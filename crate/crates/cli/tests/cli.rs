use std::path::PathBuf;
use std::process::{Command, Output};

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> String {
    manifest().join("tests/fixtures").join(name).display().to_string()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(manifest().join("tests/golden").join(name)).unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cherednik")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn s3_reflections_match_golden() {
    let out = run(&["--config", &fixture("s3.toml"), "reflections"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("s3_reflections.json"));
}

#[test]
fn z2_has_one_reflection() {
    let out = run(&["--config", &fixture("z2.toml"), "reflections"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["data"]["reflections"].as_array().unwrap().len(), 1);
    assert_eq!(v["passed"], true);
}

#[test]
fn unknown_family_is_a_config_error() {
    let out = run(&["--config", &fixture("bad_family.toml"), "reflections"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("group.family: unknown family"), "{}", stderr(&out));
}

#[test]
fn missing_config_is_a_usage_error() {
    let out = run(&["reflections"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn apply_dunkl_operators() {
    let z2 = fixture("z2.toml");
    let out = run(&["--config", &z2, "apply", "D_1", "x_1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0");
    let out = run(&["--config", &z2, "apply", "D_1", "1"]);
    assert_eq!(stdout(&out).trim(), "0");
    let out = run(&["--config", &z2, "apply", "x_1", "x_1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).trim().is_empty());
}

#[test]
fn apply_reports_parse_position() {
    let out = run(&["--config", &fixture("z2.toml"), "apply", "D_1", "x_1 * * 2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("function: parse error at position 6"), "{}", stderr(&out));
}

#[test]
fn injected_non_element_is_rejected() {
    let out = run(&["--config", &fixture("z2.toml"), "verify", "pbw", "--inject", "1/x_1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), golden("z2_pbw_inject.json"));
}

#[test]
fn non_closed_twist_is_an_error() {
    let out = run(&["--config", &fixture("nonclosed.toml"), "verify", "tdo"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), golden("nonclosed_tdo.json"));
}

#[test]
fn inverse_prime_fails_certification() {
    let out = run(&["--config", &fixture("inverse_p.toml"), "verify", "norms"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), golden("inverse_p_norms.json"));
}

#[test]
fn report_all_is_deterministic() {
    let s3 = fixture("s3.toml");
    let a = run(&["--config", &s3, "report-all"]);
    let b = run(&["--config", &s3, "report-all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--config", &s3, "--seed", "99", "report-all"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&c)).unwrap();
    assert_eq!(v["seed"], 99);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["timing"].is_null()));
}

#[test]
fn timings_are_opt_in() {
    let out = run(&["--config", &fixture("z2.toml"), "--timings", "verify", "commute"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["timing"].is_number()));
}

#[test]
fn out_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["--config", &fixture("s3.toml"), "--out", path.to_str().unwrap(), "reflections"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden("s3_reflections.json"));
}
