use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    dir.join(name).to_string_lossy().into_owned()
}

fn oca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oca"))
        .args(args)
        .env_remove("OCA_APPROX_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = oca(&full);
    (serde_json::from_str(&stdout(&o)).unwrap(), o.status.code().unwrap())
}

fn temp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("oca-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn check_reports_r_sets() {
    let o = oca(&["check", &fixture("ab-cd.lid")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("prop2: fails"), "{out}");
    assert!(out.contains("prop3: holds"), "{out}");
    let (v, _) = json(&["check", &fixture("arith.gnf")]);
    assert_eq!(v["productions"], 14);
    assert_eq!(v["regular"], serde_json::json!(["R", "L"]));
}

#[test]
fn check_rejects_form_errors() {
    let path = temp("bad.lid");
    std::fs::write(&path, "kind: lid\nstart: S\nterminals: a\nS -> S a\n").unwrap();
    let o = oca(&["check", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a valid lid production"));
}

#[test]
fn build_then_run_arith() {
    let path = temp("arith.oca");
    let o = oca(&["build", &fixture("arith.gnf"), "--out", &path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("8 marked"));

    let o = oca(&["run", &path, "--input", "i*i+(i+i)", "--grammar", &fixture("arith.gnf")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: accept"));
    assert!(out.contains(r#"tree: (E "i" (P "*" (T "i") (L "+") (E "(" (E "i" (P "+" (E "i"))) (R ")"))))"#));
    assert!(out.contains("valid for grammar: true"));
    assert_eq!(out.lines().filter(|l| l.contains("# counter")).count(), 9);

    let o = oca(&["run", &path, "--input", "i+"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: reject"));
}

#[test]
fn run_relabels_aliased_tokens() {
    let path = temp("alias.oca");
    oca(&["build", &fixture("arith.gnf"), "--out", &path]);
    let (v, code) = json(&["run", &path, "--input", "a * b", "--alias", &fixture("arith.alias")]);
    assert_eq!(code, 0);
    assert_eq!(v["terminals"], serde_json::json!(["i", "*", "i"]));
    assert!(v["tree"].as_str().unwrap().contains("\"b\""));
}

#[test]
fn lid_runs_and_nfa_target() {
    let path = temp("anbn.oca");
    oca(&["build", &fixture("anbn.lid"), "--out", &path]);
    assert_eq!(oca(&["run", &path, "--input", "aabb", "--tree", "generic"]).status.code(), Some(0));
    assert_eq!(oca(&["run", &path, "--input", "aab"]).status.code(), Some(1));
    let nfa = temp("anbn.nfa");
    oca(&["build", &fixture("anbn.lid"), "--target", "nfa", "--out", &nfa]);
    assert_eq!(oca(&["run", &nfa, "--input", "aab"]).status.code(), Some(0));
    assert_eq!(oca(&["run", &nfa, "--input", "ba"]).status.code(), Some(1));
}

#[test]
fn transform_exit_codes() {
    let o = oca(&["transform", &fixture("ab-cd.lid"), "--mode", "prop3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("A$1"));
    let o = oca(&["transform", &fixture("nested-conflict.lid"), "--mode", "prop3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("{S}"));
    let (v, code) = json(&["transform", &fixture("prefix.gnf"), "--mode", "gnf-prefix"]);
    assert_eq!(code, 0);
    assert_eq!(v["long_productions"]["after"], 0);
}

#[test]
fn compare_counts_lengths() {
    let (v, code) = json(&["compare", &fixture("anbn.lid"), "--maxlen", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["oracle_equals_oca"], true);
    assert_eq!(v["oca_equals_nfa"], false);
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
    let (v, _) = json(&["compare", &fixture("ab-cd.lid"), "--maxlen", "3"]);
    assert_eq!(v["oca_extra"], serde_json::json!([["a", "d"], ["c", "b"]]));
}

#[test]
fn small_cap_is_an_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_oca"))
        .args(["compare", &fixture("arith.gnf"), "--maxlen", "5"])
        .env("OCA_APPROX_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn oracle_membership_and_enumeration() {
    let o = oca(&["oracle", &fixture("anbn.lid"), "--enumerate", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("3 members up to length 4"));
    assert_eq!(oca(&["oracle", &fixture("anbn.lid"), "--input", "ab"]).status.code(), Some(0));
    assert_eq!(oca(&["oracle", &fixture("anbn.lid"), "--input", "ba"]).status.code(), Some(1));
}

#[test]
fn json_output_is_deterministic() {
    let path = temp("det.oca");
    oca(&["build", &fixture("arith.gnf"), "--out", &path]);
    let g = fixture("arith.gnf");
    for args in [
        vec!["check", &g],
        vec!["run", &path, "--input", "i*i+(i+i)", "--all"],
        vec!["compare", &g, "--maxlen", "4"],
    ] {
        let mut full = vec!["--format", "json"];
        full.extend(args);
        let a = stdout(&oca(&full));
        assert_eq!(a, stdout(&oca(&full)));
        let v: Value = serde_json::from_str(&a).unwrap();
        assert!(v.is_object());
    }
}
