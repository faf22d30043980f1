//! The `gradekit` binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

use gradekit::cli::{parse_report, render, Format};

fn doc(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("documents").join(name)
}

fn gradekit(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gradekit"));
    c.args(args).env_remove("GRADEKIT_SEED");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn run_doc(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let p = doc(name);
    let mut args = vec![cmd, "--in", p.to_str().unwrap()];
    args.extend_from_slice(extra);
    gradekit(&args, &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("gradekit-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn h2_report() {
    let o = run_doc("h2", "h2_klein4.json", &["--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let r = parse_report(&stdout(&o)).unwrap();
    assert_eq!(r.results["invariant_factors"], serde_json::json!([2, 2, 2]));
    assert_eq!(r.results["order"], serde_json::json!(8));
}

#[test]
fn exit_codes_follow_answers() {
    assert_eq!(run_doc("extend", "q8_sign.json", &[]).status.code(), Some(2));
    assert_eq!(run_doc("extend", "q8_sign_twisted.json", &[]).status.code(), Some(0));
    assert_eq!(run_doc("cocycle", "cocycle_check.json", &[]).status.code(), Some(2));
    assert_eq!(run_doc("theorem-a", "q8_sign.json", &[]).status.code(), Some(0));
    assert_eq!(run_doc("correspond", "q8_sign.json", &[]).status.code(), Some(0));
    assert_eq!(run_doc("nonsense", "q8_sign.json", &[]).status.code(), Some(1));
}

#[test]
fn extension_certificate_is_emitted() {
    let o = run_doc("extend", "q8_sign_twisted.json", &["--format", "structured"]);
    let r = parse_report(&stdout(&o)).unwrap();
    assert_eq!(r.results["extendable"], serde_json::json!(true));
    assert_eq!(r.certificates["act"].as_array().unwrap().len(), 8);
}

#[test]
fn obstruction_shows_class() {
    let o = run_doc("obstruction", "q8_sign.json", &[]);
    let s = stdout(&o);
    assert!(s.contains("omega_class: [0, 1, 1]"), "{s}");
    assert!(s.contains("class_order: 2"));
}

#[test]
fn wedderburn_human_render() {
    let s = stdout(&run_doc("wedderburn", "wedderburn_elementary.json", &[]));
    assert!(s.contains("A ≅ M_2(F) ⊗ F^ω I with n = 2, I = {e}"), "{s}");
    let s = stdout(&run_doc("wedderburn", "wedderburn_pauli.json", &[]));
    assert!(s.contains("n = 1, I = {e, a, b, ab}"), "{s}");
    assert!(s.contains("omega_table:"));
}

#[test]
fn structured_reports_are_deterministic_and_round_trip() {
    for (cmd, name) in [("obstruction", "q8_sign.json"), ("correspond", "q8_sign.json"), ("wedderburn", "wedderburn_pauli.json"), ("algebra", "pullback_z4.json")] {
        let a = stdout(&run_doc(cmd, name, &["--format", "structured"]));
        let b = stdout(&run_doc(cmd, name, &["--format", "structured"]));
        assert_eq!(a, b, "{cmd}");
        let r = parse_report(&a).unwrap();
        assert_eq!(render(&r, Format::Structured), a);
    }
}

#[test]
fn seed_precedence() {
    let p = doc("q8_sign.json");
    let path = p.to_str().unwrap();
    let seed_of = |o: Output| parse_report(&stdout(&o)).unwrap().seed;
    assert_eq!(seed_of(gradekit(&["correspond", "--in", path, "--format", "structured"], &[])), 7);
    assert_eq!(seed_of(gradekit(&["correspond", "--in", path, "--format", "structured"], &[("GRADEKIT_SEED", "99")])), 99);
    assert_eq!(seed_of(gradekit(&["correspond", "--in", path, "--format", "structured", "--seed", "5"], &[("GRADEKIT_SEED", "99")])), 5);
}

#[test]
fn malformed_table_is_a_parse_error() {
    let p = write_temp(
        "bad.json",
        r#"{"schema":"gradekit/1","field":"GF(5)","group":{"builtin":"cyclic","n":2},
            "cocycle":{"type":"table","values":[[1,1],[1,"z"]]},"options":{"op":"class"}}"#,
    );
    let o = gradekit(&["cocycle", "--in", p.to_str().unwrap(), "--format", "structured"], &[]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "ParseError");
    assert!(v["error"]["message"].as_str().unwrap().contains("row 1, col 1"), "{v}");
}

#[test]
fn syntax_error_reports_line() {
    let p = write_temp("syntax.json", "{\n  \"schema\": \"gradekit/1\",\n  \"field\": \n}");
    let o = gradekit(&["h2", "--in", p.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn selftest_passes() {
    let o = gradekit(&["selftest", "--format", "structured"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let r = parse_report(&stdout(&o)).unwrap();
    assert_eq!(r.results["all_passed"], serde_json::json!(true));
}

#[test]
fn timing_is_opt_in() {
    let with = parse_report(&stdout(&run_doc("h2", "h2_klein4.json", &["--format", "structured", "--timing"]))).unwrap();
    assert!(with.timing_ms.is_some());
    let without = parse_report(&stdout(&run_doc("h2", "h2_klein4.json", &["--format", "structured"]))).unwrap();
    assert!(without.timing_ms.is_none());
}
