use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nearab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("temp paths are utf-8")
}

#[test]
fn units_of_thirteen() {
    let o = nearab(&["graph", "units", "13"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "Z_13 x Z(4) x Z(3)");
    let o = nearab(&["graph", "units", "7", "--level", "2"]);
    assert!(stdout(&o).contains("(agrees)"), "{}", stdout(&o));
}

#[test]
fn master_graph_dot_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.dot"), dir.path().join("b.dot"));
    for p in [&a, &b] {
        let o = nearab(&["graph", "master", "--max-prime", "13", "--dot", path_str(p)]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("6 vertical edges, 8 sloping edges"));
    }
    let dot = std::fs::read_to_string(&a).unwrap();
    assert_eq!(dot, std::fs::read_to_string(&b).unwrap());
    assert_eq!(dot.matches("rank=").count(), 2);
    for edge in ["u3 -- l13", "u5 -- l11", "u13 -- l13"] {
        assert!(dot.contains(edge), "{edge}");
    }
    assert!(!dot.contains("u5 -- l7"));
}

#[test]
fn analyze_reports_excluded_hypotheses() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("q8.json");
    let report = dir.path().join("report.json");
    std::fs::write(&spec, r#"{"kind": "QuaternionM", "n": 2}"#).unwrap();
    let o = nearab(&["group", "analyze", path_str(&spec), "--report", path_str(&report)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("p-group class: quaternionic(n=2"));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let apq: Vec<&Value> = r["entries"].as_array().unwrap().iter().filter(|e| e["suite"] == "apq").collect();
    assert!(!apq.is_empty());
    assert!(apq.iter().all(|e| e["verdict"] == "hypothesis-not-met"));
    assert_eq!(r["summary"]["fail"], 0);
}

#[test]
fn group_build_writes_table_and_lattice() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("s.json");
    let (table, lattice) = (dir.path().join("t.json"), dir.path().join("l.dot"));
    std::fs::write(&spec, r#"{"kind": "Iwasawa", "p": 3, "q": 7, "c": 3, "z": 2}"#).unwrap();
    let o = nearab(&["group", "build", path_str(&spec), "--out", path_str(&table), "--lattice-dot", path_str(&lattice)]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("order 21"));
    assert!(stdout(&o).contains("10 subgroups"));
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&table).unwrap()).unwrap();
    assert_eq!(t["order"], 21);
    assert!(std::fs::read_to_string(&lattice).unwrap().starts_with("digraph"));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, "{\"kind\": \"Cyclic\",\n \"n\": }").unwrap();
    let o = nearab(&["group", "build", path_str(&spec)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2 column"));

    assert_eq!(nearab(&["validate", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(nearab(&["graph", "master", "--max-prime", "1"]).status.code(), Some(2));
    assert_eq!(nearab(&["group", "build", "/nonexistent/spec.json"]).status.code(), Some(2));
    assert_eq!(nearab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn validate_subset_is_sorted_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = nearab(&[
            "validate", "--suite", "nu,apq,modular-main", "--max-order", "24", "--p-group-orders", "", "--report", path_str(p),
        ]);
        assert!(o.status.success(), "{}", stdout(&o));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let r: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["suite"], "nu,apq,modular-main");
    let specs: Vec<&str> = r["entries"].as_array().unwrap().iter().map(|e| e["group_spec"].as_str().unwrap()).collect();
    assert!(specs.windows(2).all(|w| w[0] <= w[1]));
    assert!(specs.contains(&"Scalar[3]x|Z(2),r=2"));
    assert!(r["entries"].as_array().unwrap().iter().all(|e| e.get("timings").is_none()));
}

#[test]
fn lca_descriptors() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("a.json");
    std::fs::write(&file, r#"{"2": {"kind": "cyclic", "m": 4}, "3": {"kind": "zp"}}"#).unwrap();
    let o = nearab(&["lca", "classify", path_str(&file)]);
    assert!(stdout(&o).contains("pi_C {3} pi_D {2}"), "{}", stdout(&o));
    assert!(stdout(&o).contains("pi-procyclic: true"));
    let o = nearab(&["lca", "saut", path_str(&file), "--max-prime", "13"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("SAut at 3: Z_3"), "{}", stdout(&o));
    std::fs::write(&file, r#"{"4": {"kind": "zp"}}"#).unwrap();
    assert_eq!(nearab(&["lca", "classify", path_str(&file)]).status.code(), Some(2));
}
