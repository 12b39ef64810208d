use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_qnlp");
const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/section00.auto");

fn qnlp(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = qnlp(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn kinds(doc: &Value, kind: &str) -> usize {
    doc["layers"].as_array().unwrap().iter().filter(|l| l["box"]["kind"] == kind).count()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Diagram files for every fixture derivation, keyed by id.
fn parse_fixture(dir: &Path) -> impl Fn(&str) -> PathBuf + '_ {
    ok(&["parse", "--ccg", FIXTURE, "-o", s(dir)]);
    move |id| dir.join(format!("{id}.diagram.json"))
}

#[test]
fn parse_with_the_cups_reader() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&["parse", "alice reads good books now", "--reader", "cups", "-o", s(dir.path()), "--svg"]);
    let path = dir.path().join("alice_reads_good_books_now.diagram.json");
    assert_eq!(stdout.trim(), s(&path));
    let doc = json(&path);
    assert_eq!(kinds(&doc, "cup"), 4);
    assert_eq!(kinds(&doc, "word"), 5);
    assert!(dir.path().join("alice_reads_good_books_now.svg").exists());
}

#[test]
fn unknown_reader_is_a_usage_error() {
    let out = qnlp(&["parse", "a b", "--reader", "trees"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_input_is_a_runtime_error_naming_the_path() {
    let out = qnlp(&["rewrite", "/nonexistent/x.diagram.json"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/x.diagram.json"));
}

#[test]
fn every_fixture_derivation_converts() {
    let dir = tempfile::tempdir().unwrap();
    let out = qnlp(&["parse", "--ccg", FIXTURE, "-o", s(dir.path())]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("converted 22 of 22"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 22);
}

#[test]
fn rewrite_without_rules_keeps_a_normal_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let path = parse_fixture(dir.path())("fx.9");
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    ok(&["rewrite", s(&path), "-o", s(&once)]);
    ok(&["rewrite", s(&once), "-o", s(&twice)]);
    assert_eq!(fs::read(&once).unwrap(), fs::read(&twice).unwrap());
}

#[test]
fn prepositional_phrase_lowers_the_preposition_order() {
    let dir = tempfile::tempdir().unwrap();
    // John walks in the park
    let path = parse_fixture(dir.path())("fx.2");
    let order = |doc: &Value| -> usize {
        let layer = doc["layers"].as_array().unwrap().iter().find(|l| l["box"]["token"] == "in").unwrap();
        layer["box"]["cod"].as_array().unwrap().len()
    };
    let before = json(&path);
    assert_eq!(order(&before), 5);

    let stdout = ok(&["rewrite", s(&path), "--rules", "prepositional_phrase", "--svg"]);
    let out = dir.path().join("fx.2.rewritten.diagram.json");
    assert_eq!(stdout.trim(), s(&out));
    assert!(dir.path().join("fx.2.rewritten.svg").exists());
    let after = json(&out);
    assert_eq!(order(&after), 3);
    assert_eq!(after["dom"], before["dom"]);
    assert_eq!(after["cod"], before["cod"]);
}

#[test]
fn unknown_rule_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = parse_fixture(dir.path())("fx.9");
    assert_eq!(code(&qnlp(&["rewrite", s(&path), "--rules", "no_such_rule"])), 2);
}

#[test]
fn compile_to_a_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let path = parse_fixture(dir.path())("fx.9");
    let stdout = ok(&["compile", s(&path), "--ansatz", "iqp", "--q", "n=1,s=1"]);
    assert!(stdout.contains("fx.9.circuit.json"));
    let c = json(&dir.path().join("fx.9.circuit.json"));
    assert_eq!(c["open"].as_array().unwrap().len(), 1);
    assert!(c["n_qubits"].as_u64().unwrap() > 1);
}

#[test]
fn compile_to_a_tensor_network() {
    let dir = tempfile::tempdir().unwrap();
    // John gave Mary a flower
    let path = parse_fixture(dir.path())("fx.1");
    let out = dir.path().join("net.json");
    ok(&["compile", s(&path), "--ansatz", "tensor", "--d", "n=4,s=2", "-o", s(&out)]);
    let net = json(&out);
    let gave = net["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|n| n["symbol"].as_str().is_some_and(|x| x.starts_with("gave__")))
        .unwrap();
    let size: u64 = gave["shape"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).product();
    assert_eq!(size, 128);
}

#[test]
fn mps_needs_order_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = parse_fixture(dir.path())("fx.1");
    let out = qnlp(&["compile", s(&path), "--ansatz", "mps", "--max-order", "2"]);
    assert_eq!(code(&out), 2);
}

const CONFIG: &str = r#"
seed = 1
reader = "ccg"

[ansatz]
kind = "spider"
d = { n = 2, s = 2 }

[optimizer]
kind = "adam"
iterations = 30
"#;

#[test]
fn gen_dataset_then_train_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("data.tsv");
    ok(&["gen-dataset", "--seed", "4", "-o", s(&tsv)]);
    assert_eq!(fs::read_to_string(&tsv).unwrap().lines().count(), 130);
    let auto = fs::read_to_string(dir.path().join("data.auto")).unwrap();
    assert_eq!(auto.lines().filter(|l| l.starts_with("ID=")).count(), 130);

    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, CONFIG).unwrap();
    let run = dir.path().join("run");
    ok(&["train", "--config", s(&cfg), "--dataset", s(&tsv), "-o", s(&run)]);
    let history = fs::read_to_string(run.join("history.csv")).unwrap();
    assert_eq!(history.lines().next(), Some("iter,train_loss,train_acc,dev_loss,dev_acc"));
    assert_eq!(history.lines().count(), 31);
    let trained = json(&run.join("metrics.json"));

    let metrics = dir.path().join("eval.json");
    ok(&[
        "eval",
        "--config",
        s(&run.join("config.toml")),
        "--dataset",
        s(&tsv),
        "--params",
        s(&run.join("params.json")),
        "-o",
        s(&metrics),
    ]);
    let evaluated = json(&metrics);
    assert_eq!(evaluated["test_accuracy"], trained["test_accuracy"]);
    assert_eq!(evaluated["test_loss"], trained["test_loss"]);
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("data.tsv");
    ok(&["gen-dataset", "-o", s(&tsv)]);
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, CONFIG.replace("iterations", "iters")).unwrap();
    let out = qnlp(&["train", "--config", s(&cfg), "--dataset", s(&tsv), "-o", s(dir.path())]);
    assert_eq!(code(&out), 2);
}

#[test]
fn derivation_count_mismatch_fails() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("data.tsv");
    ok(&["gen-dataset", "-o", s(&tsv)]);
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, CONFIG).unwrap();
    let out = qnlp(&["train", "--config", s(&cfg), "--dataset", s(&tsv), "--derivations", FIXTURE]);
    assert_eq!(code(&out), 1);
}
