mod common;

use std::process::{Command, Output};

use common::fixtures_dir;
use serde_json::Value;

fn leibniz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leibniz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture_path(name: &str) -> String {
    fixtures_dir().join(format!("{name}.json")).display().to_string()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn verify_accepts_fixture() {
    let out = leibniz(&["verify", &fixture_path("n2")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "verify");
}

#[test]
fn verify_rejects_broken_algebra() {
    let doc = r#"{"dim": 2, "field": "Q", "brackets": [
        {"left": 1, "right": 1, "out": [{"k": 0, "c": "1"}]},
        {"left": 0, "right": 1, "out": [{"k": 1, "c": "1"}]}]}"#;
    let dir = std::env::temp_dir().join(format!("leibniz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, doc).unwrap();
    let out = leibniz(&["verify", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_one() {
    let out = leibniz(&["verify", "{\"dim\": 2, \"field\": \"Q\", \"brackets\": 7}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let out = leibniz(&["free", "[x1,"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn free_normal_form() {
    let out = leibniz(&["free", "[x1,[x2,x3]]"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("(x1 x2 x3) - (x1 x3 x2)"), "{text}");
}

#[test]
fn hnn_reports_no_collapse() {
    let out = leibniz(&["hnn", &fixture_path("n2"), "--sub", "[[1,0]]", "--map", "[[1,0],[0,0]]"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "no-collapse-up-to-4");
    assert_eq!(r["exact_model"]["status"], "model");
    assert_eq!(r["exact_model"]["verified"], true);
}

#[test]
fn divide_reports_obstruction() {
    let out = leibniz(&[
        "solve", &fixture_path("n2"), "--mode", "divide", "--a", "[1,0]", "--b", "[1,0]", "--side", "left",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["status"], "obstructed");
}

#[test]
fn text_format_is_line_oriented() {
    let out = leibniz(&["derivations", &fixture_path("sl2"), "--kind", "bider", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("command: ")), "{text}");
}
