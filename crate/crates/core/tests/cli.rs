use std::path::{Path, PathBuf};
use std::process::Command;

use symnash::cli::{self, EXIT_BUDGET, EXIT_INVALID, EXIT_IO, EXIT_NONE, EXIT_OK, EXIT_USAGE};
use symnash::fixtures;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("symnash").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn find_penny_examples() {
    let dir = tempfile::tempdir().unwrap();
    let penny = write(dir.path(), "penny.json", fixtures::PENNY_JSON);
    let r = run(&["find", s(&penny)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("\"winners\": []"));
    let r = run(&["find", s(&penny), "--winners", "0,1"]);
    assert_eq!(r.code, EXIT_NONE);
    assert!(r.out.is_empty());
    assert!(r.err.contains("no equilibrium"));
}

#[test]
fn check_rejects_stay_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let toggle = write(dir.path(), "toggle.json", fixtures::TOGGLE_JSON);
    let stay = r#"{"memory": 1, "initial": 0, "table": {
        "0,id:[a,a]": {"act": "stay", "next": 0}, "0,id:[a,b]": {"act": "stay", "next": 0},
        "0,id:[b,a]": {"act": "stay", "next": 0}, "0,id:[b,b]": {"act": "stay", "next": 0}}}"#;
    let w = write(dir.path(), "stay.json", stay);
    let r = run(&["check", s(&toggle), s(&w)]);
    assert_eq!(r.code, EXIT_NONE);
    assert!(r.err.contains("player 0 deviates"), "{}", r.err);
    assert!(r.err.contains("actions: go"));
}

#[test]
fn find_then_check_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (name, json) in [
        ("toggle", fixtures::TOGGLE_JSON),
        ("penny", fixtures::PENNY_JSON),
        ("toggle_blind", fixtures::TOGGLE_BLIND_JSON),
        ("cards6", fixtures::CARDS6_JSON),
    ] {
        let game = write(dir.path(), &format!("{name}.json"), json);
        for verb in ["find", "general"] {
            let out = dir.path().join(format!("{name}.{verb}.witness.json"));
            let r = run(&[verb, s(&game), "--memory", "1", "-o", s(&out)]);
            if r.code == EXIT_NONE {
                continue;
            }
            assert_eq!(r.code, EXIT_OK, "{name} {verb}: {}", r.err);
            let r = run(&["check", s(&game), s(&out)]);
            assert_eq!(r.code, EXIT_OK, "{name} {verb}: {}", r.err);
        }
    }
}

#[test]
fn check_detects_tampered_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let toggle = write(dir.path(), "toggle.json", fixtures::TOGGLE_JSON);
    let out = dir.path().join("w.json");
    assert_eq!(run(&["find", s(&toggle), "--winners", "0,1", "-o", s(&out)]).code, EXIT_OK);
    let text = std::fs::read_to_string(&out).unwrap();
    let tampered = text.replacen("\"winners\": [\n    0,\n    1\n  ]", "\"winners\": [\n    0\n  ]", 1);
    assert_ne!(tampered, text);
    let bad = write(dir.path(), "bad.json", &tampered);
    let r = run(&["check", s(&toggle), s(&bad)]);
    assert_eq!(r.code, EXIT_NONE);
    assert!(r.err.contains("recorded winners"));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", fixtures::TOGGLE_JSON);
    assert_eq!(run(&["find", s(&g), "--memory", "0"]).code, EXIT_USAGE);
    assert_eq!(run(&["find", s(&g), "--bogus"]).code, EXIT_USAGE);
    assert_eq!(run(&["find"]).code, EXIT_USAGE);
    assert_eq!(run(&["frobnicate", s(&g)]).code, EXIT_USAGE);
    assert_eq!(run(&["find", s(&g), "--winners", "0", "--losers", "0"]).code, EXIT_USAGE);
    assert_eq!(run(&["find", s(&g), "--winners", "7"]).code, EXIT_USAGE);
    assert_eq!(run(&["find", s(&g), "--budget-nodes", "0"]).code, EXIT_USAGE);
    assert_eq!(run(&["export-dot", s(&g), "--deviator", "0"]).code, EXIT_USAGE);
    let help = run(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.out.contains("export-dot"));
}

#[test]
fn validate_and_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", fixtures::CARDS6_JSON);
    let r = run(&["validate", s(&g)]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.err.contains("6 players"));
    let bad =
        write(dir.path(), "bad.json", &fixtures::TOGGLE_JSON.replace("\"go\": \"b\"", "\"go\": \"zz\""));
    let r = run(&["validate", s(&bad)]);
    assert_eq!(r.code, EXIT_INVALID, "{}", r.err);
    assert!(r.err.contains("unknown state `zz`"));
    let broken = write(dir.path(), "broken.json", "{");
    assert_eq!(run(&["validate", s(&broken)]).code, EXIT_INVALID);
    assert_eq!(run(&["validate", s(&dir.path().join("missing.json"))]).code, EXIT_IO);
    assert_eq!(run(&["find", s(&g), "-o", s(&dir.path().join("no/such/dir/w.json"))]).code, EXIT_IO);
}

#[test]
fn budgets() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", fixtures::TOGGLE_JSON);
    let r = run(&["find", s(&g), "--memory", "3"]);
    assert_eq!(r.code, EXIT_BUDGET);
    assert!(r.err.contains("budget"));
    assert_eq!(run(&["find", s(&g), "--budget-candidates", "15"]).code, EXIT_BUDGET);
    assert_eq!(run(&["find", s(&g), "--budget-nodes", "2"]).code, EXIT_BUDGET);
    assert_eq!(run(&["oracle", s(&g), "--memory", "2"]).code, EXIT_BUDGET);
}

#[test]
fn oracle_matches_find() {
    let dir = tempfile::tempdir().unwrap();
    for json in [fixtures::TOGGLE_JSON, fixtures::PENNY_JSON] {
        let g = write(dir.path(), "g.json", json);
        for w in ["", "0", "0,1"] {
            let a = run(&["find", s(&g), "--winners", w]);
            let b = run(&["oracle", s(&g), "--winners", w]);
            assert_eq!(a.code, b.code);
            assert_eq!(a.out, b.out);
        }
        let a = run(&["general", s(&g), "--winners", "0", "--losers", "1"]);
        let b = run(&[
            "oracle",
            "--general",
            s(&g),
            "--winners",
            "0",
            "--losers",
            "1",
            "--budget-candidates",
            "4096",
            "--budget-nodes",
            "4096",
        ]);
        assert_eq!(a.code, b.code);
        assert_eq!(a.out, b.out);
    }
}

#[test]
fn desym_writes_a_valid_game() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "penny.json", fixtures::PENNY_JSON);
    let out = dir.path().join("d.json");
    assert_eq!(run(&["desym", s(&g), "-o", s(&out)]).code, EXIT_OK);
    assert_eq!(run(&["validate", s(&out)]).code, EXIT_OK);
    let r = run(&["find", s(&out), "--winners", "0", "--losers", "1"]);
    assert_eq!(r.code, EXIT_OK);
    let general = run(&["general", s(&g), "--winners", "0", "--losers", "1"]);
    assert_eq!(general.code, EXIT_OK);
}

#[test]
fn dot_exports_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "toggle.json", fixtures::TOGGLE_JSON);
    let a = run(&["export-dot", s(&g)]);
    assert_eq!(a.code, EXIT_OK);
    assert!(a.out.starts_with("digraph game {"));
    assert_eq!(a.out.matches(" -> c").count(), 1 + 16);
    assert_eq!(a.out, run(&["export-dot", s(&g)]).out);
    let w = dir.path().join("w.json");
    assert_eq!(run(&["find", s(&g), "-o", s(&w)]).code, EXIT_OK);
    let d = run(&["export-dot", s(&g), s(&w), "--deviator", "1"]);
    assert_eq!(d.code, EXIT_OK, "{}", d.err);
    assert!(d.out.starts_with("digraph deviation_1 {"));
    let b = run(&["export-dot", s(&g), "--automaton", "0"]);
    assert!(b.out.contains("doublecircle"));
    assert_eq!(run(&["export-dot", s(&g), "--automaton", "5"]).code, EXIT_USAGE);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "penny.json", fixtures::PENNY_JSON);
    let bin = env!("CARGO_BIN_EXE_symnash");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["find", s(&g)]), Some(EXIT_OK));
    assert_eq!(code(&["find", s(&g), "--winners", "0,1"]), Some(EXIT_NONE));
    assert_eq!(code(&["find", s(&g), "--memory", "0"]), Some(EXIT_USAGE));
    assert_eq!(code(&["--version"]), Some(EXIT_OK));
}
