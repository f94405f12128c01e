//! The binary: exit codes, byte-identical repeated runs, and JSON reports
//! that agree with the text output.

use std::process::{Command, Output};

use biset_eval::evaluator::EvaluationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biset-eval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "S5", "A5", "sign"]).status.code(), Some(0));
    assert_eq!(run(&["eval", "S5", "A5", "sign", "--field", "F2"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "S5", "Z9", "trivial"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "S5", "A5", "trivial", "--field", "F4"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "S5", "A5", "trivial", "--limit", "10"]).status.code(), Some(2));
    assert_eq!(run(&["out", "S6", "--iso-limit", "100"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "S5", "A5", "/nonexistent/module"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn example_outputs() {
    assert!(stdout(&["out", "A5"]).starts_with("|H| = 60, |Aut(H)| = 120, |Inn(H)| = 60, |Out(H)| = 2"));
    assert!(stdout(&["out", "C7"]).contains("|Out(H)| = 6"));
    assert!(stdout(&["sections", "C4", "C3"]).contains("0 section orbits"));
    assert!(stdout(&["eval", "SL(2,5)", "A5", "sign"]).contains("dimension: 1\n"));
    assert!(stdout(&["eval", "F21", "C7", "trivial", "--verify"]).contains("rank: 1\n"));
    let certify = stdout(&["certify", "F21", "C7", "trivial"]);
    assert!(certify.contains("(i) normal-hall: dimension 1"), "{certify}");
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["subgroups", "S4"][..],
        &["sections", "S4", "C2", "--json"],
        &["eval", "D8", "C2", "trivial", "--verify", "--json"],
        &["out", "Q8"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

/// Value printed after `label: ` in text mode.
fn field(text: &str, label: &str) -> Option<usize> {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{label}: ")))
        .map(|v| v.split_whitespace().next().unwrap().parse().unwrap())
}

#[test]
fn json_matches_text() {
    for (g, h, m, field_name) in [
        ("S5", "A5", "trivial", "Q"),
        ("S5", "A5", "trivial", "F2"),
        ("S4", "C2", "trivial", "F3"),
        ("D8", "C4", "sign", "Q"),
        ("A4", "C1", "trivial", "Q"),
    ] {
        let base = ["eval", g, h, m, "--field", field_name, "--verify"];
        let text = stdout(&base);
        let json = stdout(&[&base[..], &["--json"]].concat());
        let r: EvaluationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", json);
        assert_eq!(field(&text, "dimension"), Some(r.dim));
        assert_eq!(field(&text, "section orbits"), Some(r.orbit_count));
        assert_eq!(field(&text, "lower bound"), Some(r.lower_bound));
        assert_eq!(field(&text, "closed formula"), r.closed_formula);
        assert_eq!(field(&text, "rank"), r.rank_dim);
        assert!(text.contains(&format!("|G| = {}, |H| = {}", r.group_order, r.subquotient_order)));
    }
}

#[test]
fn module_files() {
    let dir = std::env::temp_dir().join(format!("biset-eval-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sign.mod");
    std::fs::write(&path, "# sign of Out(A5)\nfield Q\ndim 1\nrep 1\n-1\n").unwrap();
    let p = path.to_str().unwrap();
    assert!(stdout(&["eval", "SL(2,5)", "A5", p]).contains("dimension: 1\n"));
    assert_eq!(run(&["eval", "SL(2,5)", "A5", p, "--field", "F3"]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
