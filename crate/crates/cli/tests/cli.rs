use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn binoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binoc")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

const TWO_CUBES: &str = "ring x y\nchar 0\nideal\nx^2*y - x*y^2,\nx^3,\ny^3\n";
const SIMPLE_SOCLE: &str = "ring x y\nchar 0\nideal\nx^2 - x*y,\nx*y + y^2\n";

#[test]
fn irreducible_decomposition_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", TWO_CUBES);
    let doc = dir.path().join("doc.json");
    let out = binoc(&["decompose", s(&input), "--mode", "irreducible", "--prune", "-o", s(&doc)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let d: Value = serde_json::from_str(&std::fs::read_to_string(&doc).unwrap()).unwrap();
    assert_eq!(d["schema"], "1");
    assert_eq!(d["components"].as_array().unwrap().len(), 2);
    assert_eq!(d["certificate"]["verdict"], true);
    let v = binoc(&["verify", s(&doc)]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["verdict"], true);
}

#[test]
fn tampered_document_fails_verification() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", TWO_CUBES);
    let out = binoc(&["decompose", s(&input), "--mode", "coprincipal"]);
    assert!(out.status.success());
    let mut d = json(&out);
    d["components"].as_array_mut().unwrap().truncate(1);
    let doc = write(&dir, "bad.json", &d.to_string());
    assert_eq!(binoc(&["verify", s(&doc)]).status.code(), Some(2));
}

#[test]
fn every_mode_certifies() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", "ring x y\nchar 0\nideal\nx^2 - x*y,\nx*y - y^2,\nx^3\n");
    for mode in ["coprincipal", "soccular", "binoccular", "irreducible"] {
        let doc = dir.path().join(format!("{mode}.json"));
        let out = binoc(&["decompose", s(&input), "--mode", mode, "-o", s(&doc)]);
        assert!(out.status.success(), "{mode}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(binoc(&["verify", s(&doc)]).status.code(), Some(0), "{mode}");
    }
}

#[test]
fn binoccular_closure_of_simple_socle_example() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", "ring x y\nchar 0\nideal\nx^2 - x*y,\nx*y - y^2,\nx^3\n");
    let out = binoc(&["closure", s(&input), "--kind", "binoccular"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["generators"], serde_json::json!(["x - y", "y^3"]));
}

#[test]
fn report_is_attached_in_binoccular_mode() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", TWO_CUBES);
    let out = binoc(&["decompose", s(&input), "--mode", "binoccular", "--report"]);
    assert!(out.status.success());
    assert!(json(&out)["report"]["verdict"].is_string());
}

#[test]
fn socle_and_witness_queries() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", SIMPLE_SOCLE);
    let out = binoc(&["socle", s(&input), "--prime", "x,y"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["localizations"][0]["dim"], 1);
    let out = binoc(&["witnesses", s(&input), "--key-only"]);
    assert!(out.status.success());
    assert!(!json(&out)["localizations"].as_array().unwrap().is_empty());
}

#[test]
fn infinite_fiber_is_unsupported() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", "ring x y\nchar 0\nideal\nx - y\n");
    let out = binoc(&["decompose", s(&input), "--mode", "coprincipal"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["exit"], 3);
}

#[test]
fn parse_errors_exit_with_four() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", "ring x y\nchar 0\nideal\nx^\n");
    assert_eq!(binoc(&["decompose", s(&input), "--mode", "coprincipal"]).status.code(), Some(4));
    assert_eq!(binoc(&["decompose", s(&input), "--mode", "nonsense"]).status.code(), Some(4));
    let missing = dir.path().join("missing.txt");
    assert_eq!(binoc(&["socle", s(&missing)]).status.code(), Some(4));
}

#[test]
fn render_is_deterministic_and_planar() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", TWO_CUBES);
    let a = binoc(&["render", s(&input), "--format", "svg"]);
    let b = binoc(&["render", s(&input), "--format", "svg"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("<svg xmlns"));
    let ascii = binoc(&["render", s(&input), "--soccular-closure"]);
    assert!(ascii.status.success());
    let three = write(&dir, "j.txt", "ring x y z\nchar 0\nideal\nx^2, y^2, z^2\n");
    assert_eq!(binoc(&["render", s(&three)]).status.code(), Some(3));
}

#[test]
fn prime_characteristic_input() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "i.txt", "ring x y\nchar 7\nideal\nx^2*y - x*y^2,\nx^3,\ny^3\n");
    let doc = dir.path().join("doc.json");
    let out = binoc(&["decompose", s(&input), "--mode", "binoccular", "--prune", "-o", s(&doc)]);
    assert!(out.status.success());
    assert_eq!(binoc(&["verify", s(&doc)]).status.code(), Some(0));
}
