use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use intdef::diophdef::artifact::DefinitionArtifact;
use intdef::diophdef::{build_definition, decide, DefinitionConfig, FormulaTree};
use intdef::harness::SweepReport;
use intdef::perfectclosure::PerfDefinitionArtifact;
use intdef::{FunctionField, GlobalField};
use tempfile::TempDir;

fn intdef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intdef")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn built(dir: &TempDir, field: &str, place: &str) -> PathBuf {
    let out = dir.path().join(format!("{field}.json"));
    let o = intdef(&["build", "--field", field, "--place", place, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_decide_verify() {
    let dir = TempDir::new().unwrap();
    let def = built(&dir, "F3t", "finite:t");
    let art = DefinitionArtifact::from_json(&std::fs::read_to_string(&def).unwrap()).unwrap();
    assert_eq!(art.target_place, "finite:t");

    let o = intdef(&["decide", "--def", s(&def), "--element", "1/t"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: false"));
    let o = intdef(&["decide", "--def", s(&def), "--element", "(t^2+1)/(t+2)"]);
    assert!(stdout(&o).contains("element: (t^2+1)/(t+2)"));
    assert!(stdout(&o).contains("verdict: true"));

    let report = dir.path().join("report.json");
    let o = intdef(&["verify", "--def", s(&def), "--bound", "2", "--out", s(&report)]);
    assert_eq!(o.status.code(), Some(0));
    let r = SweepReport::from_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!((r.tested, r.disagreed), (243, 0));
}

#[test]
fn rationals() {
    let dir = TempDir::new().unwrap();
    let def = built(&dir, "Q", "prime:5");
    let o = intdef(&["decide", "--def", s(&def), "--element", "-7/15"]);
    assert!(stdout(&o).contains("element: -7/15"));
    assert!(stdout(&o).contains("verdict: false"));
    let o = intdef(&["decide", "--def", s(&def), "--element", "-7/3"]);
    assert!(stdout(&o).contains("verdict: true"));
}

#[test]
fn reloaded_artifact_matches_in_memory_definition() {
    let dir = TempDir::new().unwrap();
    let def = built(&dir, "F3t", "finite:t");
    let k = FunctionField::new(3).unwrap();
    let loaded = DefinitionArtifact::from_json(&std::fs::read_to_string(&def).unwrap()).unwrap().load(&k).unwrap();
    let fresh = build_definition(&k, &k.parse_place("finite:t").unwrap(), &DefinitionConfig::default()).unwrap();
    for x in k.enumerate(3).into_iter().step_by(17) {
        assert_eq!(decide(&loaded, &x).unwrap().verdict, decide(&fresh, &x).unwrap().verdict);
    }
    for x in k.enumerate(2).into_iter().step_by(29) {
        let text = k.format_elem(&x);
        let o = intdef(&["decide", "--def", s(&def), "--element", &text]);
        let want = format!("verdict: {}", decide(&fresh, &x).unwrap().verdict);
        assert!(stdout(&o).contains(&want), "{text}");
    }
    let o = intdef(&["emit", "--def", s(&def), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(FormulaTree::from_json(&stdout(&o)).unwrap(), loaded_formula(&def));
}

fn loaded_formula(def: &Path) -> FormulaTree {
    DefinitionArtifact::from_json(&std::fs::read_to_string(def).unwrap()).unwrap().formula
}

#[test]
fn perfect_closure() {
    let dir = TempDir::new().unwrap();
    let def = dir.path().join("perf.json");
    let o = intdef(&["perfect-build", "--field", "F3t", "--place", "finite:t", "--out", s(&def)]);
    assert_eq!(o.status.code(), Some(0));
    PerfDefinitionArtifact::from_json(&std::fs::read_to_string(&def).unwrap()).unwrap();
    let o = intdef(&["perfect-decide", "--def", s(&def), "--element", "level=1; s/(s^2+1)"]);
    assert!(stdout(&o).contains("verdict: true"));
    let o = intdef(&["perfect-decide", "--def", s(&def), "--element", "level=2; 1/s"]);
    assert!(stdout(&o).contains("verdict: false"));
    let o = intdef(&["perfect-verify", "--def", s(&def), "--levels", "2", "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = SweepReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.disagreed, 0);
    assert_eq!(r.config.levels, Some(2));
    let o = intdef(&["emit", "--def", s(&def)]);
    assert!(stdout(&o).starts_with("∃ y, z:"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    assert_eq!(intdef(&["build", "--field", "F3t", "--place", "finite:t", "--out", s(&out), "--bogus"]).status.code(), Some(1));
    assert_eq!(intdef(&["build", "--field", "F6t", "--place", "finite:t", "--out", s(&out)]).status.code(), Some(1));
    assert_eq!(intdef(&["build", "--field", "F3t", "--place", "infinite", "--out", s(&out)]).status.code(), Some(1));
    let capped = intdef(&["build", "--field", "F3t", "--place", "finite:t", "--out", s(&out), "--coset-cap", "5"]);
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(intdef(&["build", "--field", "Q", "--place", "prime:5", "--out", s(&out), "--ram-bound", "0"]).status.code(), Some(3));

    let def = built(&dir, "F3t", "finite:t");
    let o = intdef(&["decide", "--def", s(&def), "--element", "(t+"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
    assert_eq!(intdef(&["decide", "--def", s(&def), "--element", "1/(t-t)"]).status.code(), Some(1));

    // a tampered artifact fails re-verification
    let text = std::fs::read_to_string(&def).unwrap().replacen("\"t^2+t\"", "\"t^2+2\"", 1);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, text).unwrap();
    assert_eq!(intdef(&["verify", "--def", s(&bad), "--bound", "1"]).status.code(), Some(2));
    assert_eq!(intdef(&["decide", "--def", "/nonexistent.json", "--element", "1"]).status.code(), Some(1));
}
