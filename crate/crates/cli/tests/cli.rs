//! End-to-end runs of the `cestrat` binary.

use std::process::{Command, Output};

use cestrat::strategy::alpha_eq;
use cestrat::syntax::parse_strategy_lenient;
use cestrat::{eval, parse_strategy, parse_term, unify};

fn cestrat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cestrat"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn assert_usage_error(o: &Output) {
    assert_eq!(o.status.code(), Some(2), "stderr: {}", stderr(o));
    assert!(o.stdout.is_empty(), "stdout: {}", stdout(o));
    assert!(!o.stderr.is_empty());
}

#[test]
fn apply_inserts_at_the_root() {
    let o = cestrat(&["apply", "--term", "var(x, reg(omega, one))", "--strategy", "ins <list([], i)>"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "list(var(x, reg(omega, one)), i)\n");
}

#[test]
fn apply_reports_failure() {
    let o = cestrat(&["apply", "--term", "a", "--strategy", "fail"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "FAIL\n");
}

#[test]
fn apply_json() {
    let o = cestrat(&["apply", "--term", "f(a)", "--strategy", "@1.ins <g([], b)>", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"], "f(g(a, b))");
}

#[test]
fn unify_reads_files_and_matches_the_library() {
    let o = cestrat(&["unify", "--left", "examples/s.ces", "--right", "examples/sprime.ces"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let printed = parse_strategy_lenient(stdout(&o).trim()).unwrap();
    let left = parse_strategy(include_str!("../examples/s.ces").trim()).unwrap();
    let right = parse_strategy(include_str!("../examples/sprime.ces").trim()).unwrap();
    assert!(alpha_eq(&printed, &unify(&left, &right).unwrap()));
    let t = parse_term("g(f(a), b)").unwrap();
    assert_eq!(eval(&printed, &t).unwrap(), Some(parse_term("list(list(g(f(a), b), j), i)").unwrap()));
}

#[test]
fn unify_json_and_trace() {
    let o = cestrat(&[
        "unify",
        "--left",
        "examples/s.ces",
        "--right",
        "examples/sprime.ces",
        "--json",
        "--trace",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ast"]["kind"], "mu");
    let steps = v["engine"]["steps"].as_u64().unwrap();
    let lines: Vec<serde_json::Value> = stderr(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len() as u64, steps);
    assert_eq!(lines[0]["rule"], "8a");
}

#[test]
fn combine_keeps_both_sides() {
    let o = cestrat(&["combine", "--left", "ins <f([])>", "--right", "@1.ins <f([])>"]);
    assert_eq!(o.status.code(), Some(0));
    let s = parse_strategy_lenient(stdout(&o).trim()).unwrap();
    let t = parse_term("a").unwrap();
    assert_eq!(eval(&s, &t).unwrap(), Some(parse_term("f(a)").unwrap()));
}

#[test]
fn merge_mode_changes_the_root_merge() {
    let nest = cestrat(&["unify", "--left", "ins <f([])>", "--right", "ins <g([], a)>"]);
    assert_eq!(stdout(&nest), "ins <f(g([], a))>\n");
    let project = cestrat(&["unify", "--left", "ins <f([])>", "--right", "ins <g([], a)>", "--merge", "leftproject"]);
    assert_eq!(stdout(&project), "ins <f([])>\n");
}

#[test]
fn psi_compiles_against_a_term() {
    let o = cestrat(&["psi", "--term", "g(f(a), b)", "--strategy", "examples/s.ces"]);
    assert_eq!(stdout(&o), "[@eps.<list([], i)>]\n");
    let o = cestrat(&["psi", "--term", "f(a)", "--strategy", "@1.ins <f([])>", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pos_ce"][0]["position"], "1");
    assert_eq!(v["pos_ce"][0]["context"], "f([])");
}

#[test]
fn check_flags_violations() {
    let ok = cestrat(&["check", "--strategy", "examples/s.ces"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = cestrat(&["check", "--strategy", "mu X. X + fail"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("monotone: no"));
    let json = cestrat(&["check", "--strategy", "mu X. @1.X + @2.X", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["linear"], false);
    assert_eq!(json.status.code(), Some(1));
}

#[test]
fn unfold_by_count_and_by_map() {
    let n = cestrat(&["unfold", "--strategy", "examples/s.ces", "--n", "1"]);
    assert_eq!(stdout(&n), "g(?x, b) ; ins <list([], i)> + @1.fail\n");
    let m = cestrat(&["unfold", "--strategy", "mu X. mu Y. @1.X + @2.Y", "--map", "X=2,Y=1"]);
    assert_eq!(stdout(&m), "@1.(@1.fail + @2.fail) + @2.fail\n");
    assert_usage_error(&cestrat(&["unfold", "--strategy", "mu X. @1.X", "--map", "X"]));
    assert_usage_error(&cestrat(&["unfold", "--strategy", "mu X. @1.X"]));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let o = cestrat(&["apply", "--term", "g(a", "--strategy", "fail"]);
    assert_usage_error(&o);
    assert!(stderr(&o).contains("--term:1:4:"), "{}", stderr(&o));
    let o = cestrat(&["unify", "--left", "ins <f([])>", "--right", "ins <f([]) +"]);
    assert_usage_error(&o);
    assert!(stderr(&o).contains("--right:1:"), "{}", stderr(&o));
}

#[test]
fn invalid_inputs_exit_with_two() {
    assert_usage_error(&cestrat(&["unify", "--left", "mu X. X", "--right", "fail"]));
    assert_usage_error(&cestrat(&["apply", "--term", "f(a, b)", "--strategy", "f(?x) ; ins <[]>"]));
    assert_usage_error(&cestrat(&["apply", "--term", "a"]));
    assert_usage_error(&cestrat(&["frobnicate"]));
    assert_usage_error(&cestrat(&["verify", "--suite", "nope"]));
}

#[test]
fn declared_signatures_are_enforced() {
    let ok = cestrat(&["apply", "--term", "f(a)", "--strategy", "ins <g([], b)>", "--signature", "examples/small.sig"]);
    assert_eq!(stdout(&ok), "g(f(a), b)\n");
    let undeclared = cestrat(&["apply", "--term", "h(a)", "--strategy", "fail", "--signature", "examples/small.sig"]);
    assert_usage_error(&undeclared);
    assert!(stderr(&undeclared).contains("`h`"));
    assert_usage_error(&cestrat(&["apply", "--term", "f(a, b)", "--strategy", "fail", "--signature", "examples/small.sig"]));
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "--suite", "theorem2", "--cases", "8", "--seed", "11"];
    let a = cestrat(&args);
    let b = cestrat(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["suite"], "theorem2");
    assert_eq!(v["seed"], 11);
    assert!(v.get("wall_time_ms").is_none());
    let timed = cestrat(&["verify", "--suite", "homomorphism", "--cases", "3", "--wall-time"]);
    let v: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v["wall_time_ms"].is_u64());
}

#[test]
fn verify_exits_one_on_failures() {
    // Under the literal bound, unfolding and the fixed-point laws disagree on constants.
    let o = cestrat(&["verify", "--suite", "fixpoint", "--cases", "20", "--mu-bound", "depth"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["failures"].as_array().unwrap().is_empty());
}
