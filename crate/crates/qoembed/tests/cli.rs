use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qoembed(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qoembed"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn group_word_and_recover() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("edge.json"), r#"{"n": 2, "adjacency": [[1], [0]]}"#).unwrap();

    let o = qoembed(dir.path(), &["group", "--graph", "edge.json", "--out", "edge.pres"]);
    assert!(o.status.success(), "{o:?}");
    assert!(dir.path().join("edge.pres").exists());
    assert!(!dir.path().join("edge.partial").exists());

    let o = qoembed(dir.path(), &["word", "--pres", "edge.pres", "--word", "0 1"]);
    assert_eq!(stdout(&o).trim(), "order 11");
    let o = qoembed(dir.path(), &["word", "--pres", "edge.pres", "--word", "0 0 0 0 0 0 0"]);
    assert_eq!(stdout(&o).trim(), "identity");

    let o = qoembed(dir.path(), &["recover", "--pres", "edge.pres"]);
    assert!(o.status.success());
    let g: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(g["adjacency"], serde_json::json!([[1], [0]]));
}

#[test]
fn interpret_reports_gen_and_relations() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("edge.json"), r#"{"n": 2, "adjacency": [[1], [0]]}"#).unwrap();
    qoembed(dir.path(), &["group", "--graph", "edge.json", "--out", "edge.pres"]);
    let o = qoembed(dir.path(), &["interpret", "--pres", "edge.pres", "--word", "1 0 -1", "--other", "1"]);
    let text = stdout(&o);
    assert!(text.contains("gen: vertex 0 sign +1"), "{text}");
    assert!(text.contains("eq: false"), "{text}");
    assert!(text.contains("R: true"), "{text}");
}

#[test]
fn encode_identity_relation() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("r.json"), r#"{"depth": 1, "pairs": [["0", "0"], ["1", "1"], ["0", "1"]]}"#).unwrap();
    let o = qoembed(dir.path(), &["--depth", "1", "encode", "--relation", "r.json", "--out", "b.json"]);
    assert!(o.status.success(), "{o:?}");
    let bundle: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert!(bundle.get("skeletons").is_some());
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("edge.json"), r#"{"n": 2, "adjacency": [[1], [0]]}"#).unwrap();
    let o = qoembed(dir.path(), &["metric", "--graph", "edge.json", "--r0", "1", "--r1", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qoembed(dir.path(), &["word", "--pres", "missing.pres", "--word", "0"]);
    assert_eq!(o.status.code(), Some(2));
    fs::write(dir.path().join("cycle.json"), r#"{"depth": 1, "pairs": [["0", "1"]]}"#).unwrap();
    let o = qoembed(dir.path(), &["--depth", "1", "encode", "--relation", "cycle.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn metric_accepts_rationals() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("path.json"), r#"{"n": 3, "adjacency": [[1], [0, 2], [1]]}"#).unwrap();
    let o = qoembed(dir.path(), &["metric", "--graph", "path.json", "--r0", "1", "--r1", "3/2"]);
    assert!(o.status.success(), "{o:?}");
    let m: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(m["dist"].as_array().unwrap().len(), 3);
}
