//! End-to-end tests of the binary: exit codes, output shapes, determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modalcheck"))
        .args(args)
        .env("MODALCHECK_COLOR", "never")
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn check_succeeds_on_the_positive_corpus() {
    for file in ["k.mml", "k4.mml", "s4.mml", "s4-idem.mml", "int-cl.mml", "eval.mml"] {
        let out = run(&["check", &format!("corpus/{file}")]);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stderr(&out));
    }
}

#[test]
fn check_on_an_empty_module_is_a_success_with_no_output() {
    let out = run(&["check", "corpus/empty.mml"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
}

#[test]
fn semantic_failures_exit_one() {
    let out = run(&["check", "corpus/negative/bad-cell.mml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cell-missing"), "{}", stderr(&out));

    let out = run(&["check", "--strict-atoms", "corpus/negative/ill-formed.mml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("wf"));

    let out = run(&["check", "corpus/negative/lem-at-int.mml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not-classical"));
}

#[test]
fn the_strict_atoms_file_is_accepted_without_the_flag() {
    // Atoms are mode-polymorphic by default; only --strict-atoms pins them.
    let out = run(&["check", "corpus/negative/ill-formed.mml"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn io_and_parse_problems_exit_two() {
    let out = run(&["check", "no-such-file.mml"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["nonsense-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cells_reports_found_not_found_and_unknown() {
    let out = run(&["cells", "s4-comonad", "box", "box.box"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("Found"), "{text}");
    assert!(text.contains("monotone map [2] -> [1]"), "{text}");

    let out = run(&["cells", "k", "box", "box.box"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NotFound"));

    let out = run(&["cells", "k4-free", "box", "box.box.box", "--depth", "1"]);
    assert!(stdout(&out).contains("Unknown"));
    let out = run(&["cells", "k4-free", "box", "box.box.box", "--depth", "2"]);
    assert!(stdout(&out).contains("Found"));

    let out = run(&["cells", "k", "box", "no-such-generator"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cells_accepts_a_theory_file() {
    let out = run(&["cells", "corpus/s4.mtt", "box", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Found"));
}

#[test]
fn eval_reduces_and_reports_fuel_exhaustion() {
    let out = run(&["eval", "corpus/eval.mml", "idbeta"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("\\x : p0."), "{}", stdout(&out));

    let out = run(&["eval", "corpus/eval.mml", "ax4app", "--fuel", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "box{box.box} h");

    let out = run(&["eval", "corpus/eval.mml", "ax4app", "--fuel", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("FuelExhausted after 0 steps"));

    let out = run(&["eval", "corpus/eval.mml", "no-such-decl"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["eval", "corpus/negative/bad-cell.mml", "ax4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_trace_is_valid_json_with_steps() {
    let out = run(&["eval", "corpus/eval.mml", "ax4app", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["decl"], "ax4app");
    assert_eq!(report["normalized"], true);
    let steps = report["trace"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[0]["rule"], "app-lam");
    assert_eq!(steps[1]["rule"], "let-box");
}

#[test]
fn weak_evaluation_stops_at_a_box_head() {
    let out = run(&["eval", "corpus/eval.mml", "ax4app", "--weak", "--trace"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["normal_form"]
        .as_str()
        .unwrap()
        .starts_with("box{box.box}"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let a = run(&["check", "--json", "corpus/k.mml", "corpus/s4.mml"]);
    let b = run(&["check", "--json", "corpus/k.mml", "corpus/s4.mml"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    let parsed: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(parsed.as_array().unwrap().len() >= 8);
}

#[test]
fn diagnostics_are_sorted_by_file_then_span() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let out = Command::new(env!("CARGO_BIN_EXE_modalcheck"))
        .args([
            "check",
            "negative/lem-at-int.mml",
            "negative/bad-cell.mml",
        ])
        .env("MODALCHECK_COLOR", "never")
        .current_dir(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stderr);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("negative/bad-cell.mml"), "{text}");
    assert!(lines[1].starts_with("negative/lem-at-int.mml"), "{text}");
}
