use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

fn magiclab(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_magiclab")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {stdout}"));
    (value, out.status.code().unwrap())
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// C_3 with arcs (1,2), (2,3), (1,3), vertices 1, 2, 3 and arcs 6, 4, 5.
fn c3_val9() -> Value {
    json!({
        "graph": {"n": 3, "arcs": [[1, 2], [2, 3], [1, 3]]},
        "vertex_labels": {"1": 1, "2": 2, "3": 3},
        "arc_labels": [[1, 2, 6], [2, 3, 4], [1, 3, 5]]
    })
}

fn forward_c3_val9() -> Value {
    json!({
        "graph": {"n": 3, "arcs": [[1, 2], [2, 3], [3, 1]]},
        "vertex_labels": {"1": 1, "2": 2, "3": 3},
        "arc_labels": [[1, 2, 6], [2, 3, 4], [3, 1, 5]]
    })
}

#[test]
fn verify_running_example() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c3.json", &c3_val9());
    let (out, code) = magiclab(&["verify", "--labeling", s(&f)]);
    assert_eq!(code, 0);
    assert_eq!(out["status"], "ok");
    assert_eq!(out["payload"], json!({"edge_magic": true, "valence": 9, "super": true}));
}

#[test]
fn verify_reports_conflict() {
    let dir = TempDir::new().unwrap();
    let mut bad = c3_val9();
    bad["arc_labels"] = json!([[1, 2, 4], [2, 3, 6], [1, 3, 5]]);
    let f = write(&dir, "bad.json", &bad);
    let (out, code) = magiclab(&["verify", "--labeling", s(&f)]);
    assert_eq!(code, 0);
    assert_eq!(out["payload"]["edge_magic"], false);
    assert_eq!(out["payload"]["conflict"]["arc"], json!([2, 3]));
}

#[test]
fn transform_round_trips_through_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c3.json", &c3_val9());
    let out_path = dir.path().join("bar.json");
    let (out, code) = magiclab(&["transform", "--op", "complement", "--labeling", s(&f), "--out", s(&out_path)]);
    assert_eq!(code, 0);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written, out["payload"]);
    let (check, _) = magiclab(&["verify", "--labeling", s(&out_path)]);
    assert_eq!(check["payload"]["valence"], 12);

    let (back, _) = magiclab(&["transform", "--op", "complement", "--labeling", s(&out_path)]);
    assert_eq!(back["payload"], c3_val9());
}

#[test]
fn transform_odd_needs_super() {
    let dir = TempDir::new().unwrap();
    let mut bar = c3_val9();
    // Complement of the running example: not super edge-magic.
    bar["vertex_labels"] = json!({"1": 6, "2": 5, "3": 4});
    bar["arc_labels"] = json!([[1, 2, 1], [2, 3, 3], [1, 3, 2]]);
    let f = write(&dir, "bar.json", &bar);
    let (out, code) = magiclab(&["transform", "--op", "odd", "--labeling", s(&f)]);
    assert_eq!(code, 4, "{out}");
    assert_eq!(out["code"], "precondition");
}

#[test]
fn oracle_even_cycle_not_super() {
    let (out, code) = magiclab(&["oracle", "--graph", "cycle:4", "--mode", "sem"]);
    assert_eq!(code, 0);
    assert_eq!(out["payload"]["valences"], json!([]));
    let (out, _) = magiclab(&["oracle", "--graph", "cycle:4", "--mode", "em"]);
    assert_eq!(out["payload"]["valences"], json!([12, 13, 14, 15]));
}

#[test]
fn oracle_reads_digraph_file() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", &json!({"n": 3, "arcs": [[1, 2], [2, 3], [1, 3]]}));
    let (out, code) = magiclab(&["oracle", "--graph", s(&g)]);
    assert_eq!(code, 0);
    assert_eq!(out["payload"]["valences"], json!([9, 10, 11, 12]));
}

#[test]
fn oracle_guard_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_magiclab"))
        .args(["oracle", "--graph", "cycle:7"])
        .env("MAGICLAB_ORACLE_GUARD", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn product_tqs_example() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c3f.json", &forward_c3_val9());
    let (member, code) = magiclab(&["families", "t-member", "--labeling", s(&f)]);
    assert_eq!(code, 0);
    assert_eq!(member["payload"]["sigma"], 9);
    let h = write(&dir, "h.json", &json!({"constant": member["payload"]}));
    let d = write(&dir, "d.json", &json!({"p": 3, "k": 3, "digraph": {"n": 3, "arcs": [[1, 2], [2, 3], [3, 1]]}}));
    let dot = dir.path().join("prod.dot");
    let (out, code) = magiclab(&["product", "--mode", "tqs", "--d", s(&d), "--h", s(&h), "--emit-dot", s(&dot)]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["payload"]["valence"], 27);
    assert_eq!(out["payload"]["provenance"]["construction"], "tqs");
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    let prod = write(&dir, "prod.json", &out["payload"]["labeling"]);
    let (check, _) = magiclab(&["verify", "--labeling", s(&prod)]);
    assert_eq!(check["payload"]["valence"], 27);
}

#[test]
fn product_spk_per_arc_assignment() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c3.json", &c3_val9());
    let (members, _) = magiclab(&["families", "enumerate-s", "--p", "3"]);
    assert_eq!(members["payload"]["count"], 2);
    let [a, b] = [&members["payload"]["members"][0], &members["payload"]["members"][1]];
    let h = json!({"assignment": [
        {"arc": [1, 2], "member": a}, {"arc": [2, 3], "member": b}, {"arc": [1, 3], "member": a}
    ]});
    let h = write(&dir, "h.json", &h);
    let (out, code) = magiclab(&["product", "--mode", "spk", "--d", s(&f), "--h", s(&h)]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["payload"]["valence"], 3 * (9 - 3) + 3 + 3);
}

#[test]
fn product_rejects_partial_assignment() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c3.json", &c3_val9());
    let (members, _) = magiclab(&["families", "enumerate-s", "--p", "3"]);
    let h = write(&dir, "h.json", &json!({"assignment": [{"arc": [1, 2], "member": members["payload"]["members"][0]}]}));
    let (out, code) = magiclab(&["product", "--mode", "spk", "--d", s(&f), "--h", s(&h)]);
    assert_eq!(code, 3);
    assert_eq!(out["code"], "schema");
}

#[test]
fn malformed_json_is_schema_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"graph\": ").unwrap();
    let (out, code) = magiclab(&["verify", "--labeling", s(&path)]);
    assert_eq!(code, 3);
    assert_eq!(out["status"], "error");

    let mut dup = c3_val9();
    dup["vertex_labels"] = json!({"1": 1, "2": 1, "3": 3});
    let path = write(&dir, "dup.json", &dup);
    let (_, code) = magiclab(&["verify", "--labeling", s(&path)]);
    assert_eq!(code, 3);
}

#[test]
fn unknown_command_and_missing_file_are_usage_errors() {
    assert_eq!(magiclab(&["frobnicate"]).1, 2);
    assert_eq!(magiclab(&["verify", "--labeling", "/nonexistent/x.json"]).1, 2);
}

#[test]
fn cycles_commands() {
    let (out, code) = magiclab(&["cycles", "structure", "--m", "5", "--n", "9", "--g", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out["payload"]["components"], json!([15, 15, 15]));

    let (out, code) = magiclab(&["cycles", "coverage", "--n", "9", "--constructions-only"]);
    assert_eq!(code, 0);
    let achieved: Vec<u64> = out["payload"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["status"] == "achieved")
        .map(|e| e["valence"].as_u64().unwrap())
        .collect();
    assert_eq!(achieved, vec![24, 27, 28, 29, 30, 33]);

    let dir = TempDir::new().unwrap();
    let f = write(&dir, "c3.json", &forward_c3_val9());
    let (out, code) = magiclab(&["cycles", "mcquillan", "--variant", "i", "--m", "3", "--p", "3", "--base", s(&f)]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["payload"]["valence"], 3 * 9 - 3);
    let (out, code) = magiclab(&["cycles", "mcquillan", "--variant", "ii", "--m", "3", "--p", "3", "--base", s(&f)]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out["payload"]["valence"], 3 * 2 * 3 + 9);
}

#[test]
fn emitted_json_reparses_to_equal_value() {
    let dir = TempDir::new().unwrap();
    let (out, _) = magiclab(&["oracle", "--graph", "cycle:5", "--mode", "sem"]);
    let report: magiclab::oracle::ValenceReport = serde_json::from_value(out["payload"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), out["payload"]);
    let cert = write(&dir, "cert.json", &out["payload"]["certificates"][0]);
    let (check, _) = magiclab(&["verify", "--labeling", s(&cert)]);
    assert_eq!(check["payload"], json!({"edge_magic": true, "valence": 14, "super": true}));
}
