use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mmm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmm"))
        .arg("--territory")
        .arg(dir)
        .args(args)
        .env_remove("MMM_TERRITORY")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = mmm(dir, args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    stdout(&o).trim_end().to_string()
}

fn territory() -> TempDir {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["init", "--name", "test", "--author", "Anne"]);
    dir
}

fn is_id(s: &str) -> bool {
    s.len() == 32 && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
}

#[test]
fn adding_a_question_prints_its_id() {
    let dir = territory();
    let o = mmm(dir.path(), &["add", "node", "--type", "question", "--label", "Why?"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(is_id(out.trim_end()), "{out:?}");
    assert!(out.ends_with('\n'));
}

#[test]
fn empty_label_is_a_domain_error() {
    let dir = territory();
    let o = mmm(dir.path(), &["add", "node", "--type", "question", "--label", ""]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("EmptyVertexLabel"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_one() {
    let dir = territory();
    assert_eq!(mmm(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(mmm(dir.path(), &["add", "node", "--label", "x"]).status.code(), Some(1));
    assert_eq!(mmm(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_type_is_named() {
    let dir = territory();
    let o = mmm(dir.path(), &["add", "node", "--type", "answer", "--label", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("UnknownType"));
}

#[test]
fn simulation_output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = mmm(dir.path(), &["sim", "run", "limbo-filter", "--seed", "7"]);
    let b = mmm(dir.path(), &["sim", "run", "limbo-filter", "--seed", "7"]);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let c = mmm(dir.path(), &["sim", "run", "limbo-filter", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
    let bad = mmm(dir.path(), &["sim", "run", "tsunami"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("UnknownScenario"));
}

#[test]
fn ids_resolve_by_either_end() {
    let dir = territory();
    let q = ok(dir.path(), &["add", "node", "--type", "question", "--label", "Is water wet?"]);
    let n = ok(dir.path(), &["add", "node", "--type", "narrative", "--label", "It depends"]);
    let e = ok(dir.path(), &["add", "edge", "--type", "answers", "--from", &n[24..], "--to", &q[..]]);
    assert!(is_id(&e));
    let label = ok(dir.path(), &["--json", "show", &e[24..]]);
    let v: Value = serde_json::from_str(&label).unwrap();
    assert_eq!(v["from"], n.as_str());
    assert_eq!(v["to"], q.as_str());
    let short = mmm(dir.path(), &["show", &q[..4]]);
    assert_eq!(short.status.code(), Some(2));
    assert!(stderr(&short).contains("Malformed"));
    let missing = mmm(dir.path(), &["show", "ffffffffffff"]);
    assert!(stderr(&missing).contains("UnknownId"));
}

#[test]
fn json_mode_prints_one_object_per_line() {
    let dir = territory();
    for label in ["Alpha question", "Beta question", "Gamma question"] {
        ok(dir.path(), &["add", "node", "--type", "question", "--label", label]);
    }
    let out = ok(dir.path(), &["--json", "query", "type:question"]);
    let rows: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["type"] == "question" && r["status"] == "local"));
    let err = mmm(dir.path(), &["--json", "show", "ffffffffffff"]);
    let v: Value = serde_json::from_str(stderr(&err).trim()).unwrap();
    assert_eq!(v["error"], "UnknownId");
}

#[test]
fn state_persists_between_invocations() {
    let dir = territory();
    let q = ok(dir.path(), &["add", "node", "--type", "question", "--label", "Persist?"]);
    let listed = ok(dir.path(), &["--json", "list"]);
    assert!(listed.contains(&q));
    ok(dir.path(), &["obsolete", &q]);
    let snap = ok(dir.path(), &["--json", "timetravel", "--at", "1"]);
    let v: Value = serde_json::from_str(&snap).unwrap();
    assert_eq!(v["landmarks"], 1);
    assert!(!dir.path().join(".lock").exists());
}

#[test]
fn a_held_lock_refuses_a_second_session() {
    let dir = territory();
    std::fs::write(dir.path().join(".lock"), "").unwrap();
    let o = mmm(dir.path(), &["list"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("locked"));
    std::fs::remove_file(dir.path().join(".lock")).unwrap();
    assert!(mmm(dir.path(), &["list"]).status.success());
}

#[test]
fn missing_territory_is_reported() {
    let dir = TempDir::new().unwrap();
    let o = mmm(&dir.path().join("nowhere"), &["list"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Io"));
    assert_eq!(mmm(dir.path(), &["init"]).status.code(), Some(0));
    assert_eq!(mmm(dir.path(), &["init"]).status.code(), Some(2));
}

#[test]
fn territory_comes_from_the_environment() {
    let dir = territory();
    let o = Command::new(env!("CARGO_BIN_EXE_mmm"))
        .args(["add", "node", "--type", "narrative", "--label", "From env"])
        .env("MMM_TERRITORY", dir.path())
        .current_dir(std::env::temp_dir())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(ok(dir.path(), &["list"]).contains("From env"));
}

#[test]
fn peers_exchange_through_files() {
    let alice = TempDir::new().unwrap();
    let bob = TempDir::new().unwrap();
    ok(alice.path(), &["init", "--name", "alice", "--author", "Alice"]);
    ok(bob.path(), &["init", "--name", "bob", "--author", "Bob"]);
    let q = ok(alice.path(), &["add", "node", "--type", "question", "--label", "Is water wet?"]);
    let a = ok(alice.path(), &["add", "node", "--type", "narrative", "--label", "Only when touching"]);
    ok(alice.path(), &["add", "edge", "--type", "answers", "--from", &a, "--to", &q]);
    ok(alice.path(), &["share", &q, &a, "--peer", "bob"]);
    let outbox = alice.path().join("outbox").join("bob.jsonl");
    let report = ok(bob.path(), &["--json", "receive", outbox.to_str().unwrap()]);
    let v: Value = serde_json::from_str(report.lines().next().unwrap()).unwrap();
    assert_eq!(v["from"], "alice");
    assert_eq!(v["fresh"].as_array().unwrap().len(), 2);
    let pending = ok(bob.path(), &["--json", "pending"]);
    assert_eq!(pending.lines().count(), 2);
    ok(bob.path(), &["accept", &q]);
    ok(bob.path(), &["reject", &a]);
    assert_eq!(ok(bob.path(), &["--json", "pending"]), "");
    let again = ok(bob.path(), &["--json", "receive", outbox.to_str().unwrap()]);
    let v: Value = serde_json::from_str(again.lines().next().unwrap()).unwrap();
    assert_eq!(v["fresh"], serde_json::json!([a]));
}

#[test]
fn annotation_adds_node_and_edge() {
    let dir = territory();
    let n = ok(dir.path(), &["add", "node", "--type", "narrative", "--label", "Water boils at 100C"]);
    let out = ok(
        dir.path(),
        &["--json", "annotate", "--pattern", "question", "--target", &n, "--label", "At what pressure?"],
    );
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(is_id(v["node"].as_str().unwrap()));
    let edge = ok(dir.path(), &["--json", "show", v["edge"].as_str().unwrap()]);
    let e: Value = serde_json::from_str(&edge).unwrap();
    assert_eq!(e["type"], "questions");
    assert_eq!(e["to"], n.as_str());
    let bad = mmm(dir.path(), &["annotate", "--pattern", "shrug", "--target", &n, "--label", "x"]);
    assert_eq!(bad.status.code(), Some(2));
}
