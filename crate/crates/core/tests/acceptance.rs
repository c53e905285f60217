//! Acceptance gate: one line per criterion.
//!
//! Each criterion is either expected to hold, or expected to fail in a
//! specific, analysed way. The process exits non-zero when any criterion
//! departs from its expectation, so a known failure stays visible as `FAIL`
//! without turning the run red, and an unexplained one does turn it red.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cestrat::oracle::{all_terms, gen_strategy, gen_term, run_suite, GenConfig, Report, Stream, Suite};
use cestrat::pos::{canonicalize, eq_pos};
use cestrat::strategy::{alpha_eq, from_json, to_json};
use cestrat::unify::EngineStats;
use cestrat::{
    apply_pos_ce, eval, parse_context, parse_pos_ce, parse_strategy, parse_term, psi, unify_pos, EngineOptions,
    MergeMode, MuBound, Session, Signature, Strategy,
};

const C1_BUDGET: Duration = Duration::from_secs(1);
const C2_BUDGET: Duration = Duration::from_secs(1);
const C3_BUDGET: Duration = Duration::from_secs(30);
const C4_BUDGET: Duration = Duration::from_secs(60);
const C5_BUDGET: Duration = Duration::from_secs(60);
const C6_BUDGET: Duration = Duration::from_secs(60);

const C3_CASES: usize = 2_000;
const C4_CASES: usize = 1_000;
const C5_CASES: usize = 200;
const C6_CASES: usize = 500;
/// Strategy depth of the algebra triples. Nested unifications grow with the
/// product of the three input sizes, so the triples are one level shallower
/// than the pairs of criteria 3 and 4.
const C6_STRATEGY_DEPTH: usize = 3;
const C8_CASES: usize = 500;
const C8_TOPDOWN_CASES: usize = 50;
const C9_ROUND_TRIPS: usize = 2_000;
const C9_CASES: usize = 30;

/// Whether a criterion is expected to hold.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Expect {
    Pass,
    /// Expected to fail; the criterion checks that the failure is the analysed one.
    KnownFailure,
}

struct Gate {
    unexpected: usize,
    engine: EngineStats,
    monotone_failures: usize,
}

impl Gate {
    /// Prints the line for criterion `n`. `holds` is the criterion itself;
    /// `as_analysed` is whether a known failure has the analysed shape.
    fn line(&mut self, n: usize, expect: Expect, holds: bool, as_analysed: bool, detail: String) {
        let verdict = if holds { "PASS" } else { "FAIL" };
        let note = match (expect, holds, as_analysed) {
            (Expect::Pass, true, _) => String::new(),
            (Expect::Pass, false, _) => {
                self.unexpected += 1;
                " [unexpected]".to_string()
            }
            (Expect::KnownFailure, false, true) => " [known failure, as analysed]".to_string(),
            (Expect::KnownFailure, _, _) => {
                self.unexpected += 1;
                " [does not match the analysis]".to_string()
            }
        };
        println!("criterion {n}: {verdict}{note} {detail}");
    }

    fn absorb(&mut self, r: &Report) {
        self.engine.unifications += r.engine.unifications;
        self.engine.steps += r.engine.steps;
        self.engine.measure_violations += r.engine.measure_violations;
        self.monotone_failures += r.failures_of("monotone") + r.failures_of("measure");
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn config(cases: usize) -> GenConfig {
    GenConfig {
        cases,
        ..GenConfig::default()
    }
}

fn summary(r: &Report) -> String {
    format!("{} cases, {} checks, failures {:?}", r.cases, r.checks, r.failures_by_law)
}

fn s(src: &str) -> Strategy {
    parse_strategy(src).unwrap()
}

fn criterion1(gate: &mut Gate) {
    let (ok, took) = timed(|| {
        let merge = parse_context("list([], i)")
            .unwrap()
            .merge(&parse_context("list([], j)").unwrap(), MergeMode::Nest)
            == parse_context("list(list([], j), i)").unwrap();
        let insertion = eval(&s("ins <list([], i)>"), &parse_term("var(x, reg(omega, one))").unwrap()).unwrap()
            == Some(parse_term("list(var(x, reg(omega, one)), i)").unwrap());
        let jumps_term = parse_term("d(u, x)").unwrap();
        let expected = parse_term("d(list(u, i), list(x, j))").unwrap();
        let jumps = eval(&s("[@1.ins <list([], i)>, @2.ins <list([], j)>]"), &jumps_term).unwrap() == Some(expected.clone())
            && apply_pos_ce(&parse_pos_ce("[@1.<list([], i)>, @2.<list([], j)>]").unwrap(), &Some(jumps_term))
                == Some(expected);
        // Positions p1, p2, p3 of E and q1, q2 of E' instantiated as
        // 1.1, 1.2, 2.1 and 2.2, 2, with p1 shared.
        let e = parse_pos_ce("[@1.1.<list([], i)>, @1.2.<idx([])>, @2.1.<f([])>]").unwrap();
        let e2 = parse_pos_ce("[@1.1.<list([], j)>, @2.2.<g([], a)>, @2.<reg([], one)>]").unwrap();
        let want = parse_pos_ce(
            "[@1.1.<list(list([], j), i)>, @1.2.<idx([])>, @2.1.<f([])>, @2.2.<g([], a)>, @2.<reg([], one)>]",
        )
        .unwrap();
        let got = unify_pos(&e, &e2, MergeMode::Nest).unwrap();
        let e_double = canonicalize(&got).unwrap() == canonicalize(&want).unwrap();
        [merge, insertion, jumps, e_double]
    });
    let holds = ok.iter().all(|&b| b) && took < C1_BUDGET;
    gate.line(1, Expect::Pass, holds, true, format!("merge/insert/jumps/E'' = {ok:?} in {took:?}"));
}

fn criterion2(gate: &mut Gate) {
    let ((alpha, cases, stats), took) = timed(|| {
        let left = s("mu X. g(?x, b) ; ins <list([], i)> + @1.X");
        let right = s("mu Y. g(f(?w), ?z) ; ins <list([], j)> + @1.Y");
        let mut sess = Session::new(EngineOptions {
            check_measure: true,
            ..EngineOptions::default()
        });
        let u = sess.unify(&left, &right).unwrap();
        let expected = s(&format!(
            "mu Z. g(?x, b) ; (g(f(?w), ?z) ; ins <list(list([], j), i)> + (if @1.({right}) then [@1.({right}), @eps.ins <list([], i)>])) \
             + (g(f(?w), ?z) ; (if @1.({left}) then [@1.({left}), @eps.ins <list([], j)>]) + @1.Z)"
        ));
        let alpha = alpha_eq(&u, &expected);
        let combined = sess.combine(&left, &right).unwrap();
        let table = [
            ("g(f(a), b)", "list(list(g(f(a), b), j), i)"),
            ("g(g(f(a), a), b)", "list(g(list(g(f(a), a), j), b), i)"),
            ("g(f(g(a, b)), a)", "list(g(f(list(g(a, b), i)), a), j)"),
            ("f(g(f(a), b))", "f(list(list(g(f(a), b), j), i))"),
        ];
        let cases: Vec<bool> = table
            .iter()
            .map(|(t, want)| eval(&combined, &parse_term(t).unwrap()).unwrap() == Some(parse_term(want).unwrap()))
            .collect();
        (alpha, cases, sess.stats().clone())
    });
    gate.engine.unifications += stats.unifications;
    gate.engine.steps += stats.steps;
    gate.engine.measure_violations += stats.measure_violations;
    let holds = alpha && cases.iter().all(|&b| b) && took < C2_BUDGET;
    gate.line(2, Expect::Pass, holds, true, format!("alpha-equivalent = {alpha}, four cases = {cases:?} in {took:?}"));
}

fn criterion3(gate: &mut Gate) {
    let (r, took) = timed(|| run_suite(Suite::Homomorphism, &config(C3_CASES)));
    gate.line(3, Expect::Pass, r.passed() && took < C3_BUDGET, true, format!("{} in {took:?}", summary(&r)));
}

fn criterion4(gate: &mut Gate) {
    let ((r1, r2), took) = timed(|| {
        (run_suite(Suite::Theorem1, &config(C4_CASES)), run_suite(Suite::Theorem2, &config(C4_CASES)))
    });
    gate.absorb(&r1);
    gate.absorb(&r2);
    let holds = r1.passed() && r2.passed() && took < C4_BUDGET;
    gate.line(4, Expect::Pass, holds, true, format!("theorem1: {}; theorem2: {} in {took:?}", summary(&r1), summary(&r2)));
}

fn criterion5(gate: &mut Gate) {
    let ((literal, shifted), took) = timed(|| {
        (run_suite(Suite::Unfold, &config(C5_CASES)), run_suite(Suite::UnfoldShifted, &config(C5_CASES)))
    });
    gate.absorb(&literal);
    gate.absorb(&shifted);
    // With `mu X. T` iterating depth(t) + 1 times, an unfolding at n runs one
    // iteration short on terms of depth n; taken at n + 1 it agrees everywhere.
    let only_unfold = literal.failures_of("unfold-n") == literal.failures.len();
    let analysed = !literal.passed() && only_unfold && shifted.passed();
    gate.line(
        5,
        Expect::KnownFailure,
        literal.passed() && took < C5_BUDGET,
        analysed,
        format!("unfold at n: {}; unfold at n+1: {} in {took:?}", summary(&literal), summary(&shifted)),
    );
}

fn criterion6(gate: &mut Gate) {
    let cfg = GenConfig {
        max_strategy_depth: C6_STRATEGY_DEPTH,
        ..config(C6_CASES)
    };
    let (r, took) = timed(|| run_suite(Suite::Algebra, &cfg));
    gate.absorb(&r);
    let refuted = r.counterexamples.iter().all(|c| c.witness.is_some()) && !r.counterexamples.is_empty();
    gate.line(
        6,
        Expect::Pass,
        r.passed() && refuted && took < C6_BUDGET,
        true,
        format!("{}; nest counterexamples refuted = {refuted} in {took:?}", summary(&r)),
    );
}

fn criterion7(gate: &mut Gate) {
    let holds = gate.engine.measure_violations == 0 && gate.monotone_failures == 0 && gate.engine.steps > 0;
    let detail = format!(
        "{} unifications, {} steps, {} measure violations, {} monotonicity failures",
        gate.engine.unifications, gate.engine.steps, gate.engine.measure_violations, gate.monotone_failures
    );
    gate.line(7, Expect::Pass, holds, true, detail);
}

fn criterion8(gate: &mut Gate) {
    let (fix, td, lit_fix, lit_td) = {
        let fix = run_suite(Suite::Fixpoint, &config(C8_CASES));
        let td = run_suite(Suite::TopDown, &config(C8_TOPDOWN_CASES));
        let literal = GenConfig {
            mu_bound: MuBound::Depth,
            ..config(C8_CASES)
        };
        let lit_fix = run_suite(Suite::Fixpoint, &literal);
        let lit_td = run_suite(Suite::TopDown, &GenConfig { cases: C8_TOPDOWN_CASES, ..literal });
        (fix, td, lit_fix, lit_td)
    };
    // No single iteration count satisfies both halves: with depth(t)
    // iterations every fixed point fails on constants, so m = 1 and the
    // top-down replay fail; with depth(t) + 1 iterations, m = 0 runs one
    // iteration short.
    let m0 = fix.failures_of("fixpoint-m0");
    let analysed = m0 > 0
        && m0 == fix.failures.len()
        && td.passed()
        && lit_fix.failures_of("fixpoint-m0") == 0
        && lit_fix.failures_of("fixpoint-m1") > 0
        && !lit_td.passed();
    gate.line(
        8,
        Expect::KnownFailure,
        fix.failures_of("fixpoint-m0") + fix.failures_of("fixpoint-m1") + fix.failures_of("fixpoint-m2") == 0
            && td.passed(),
        analysed,
        format!(
            "fixpoint: {}; topdown: {}; with depth(t) iterations: fixpoint {:?}, topdown {} failures",
            summary(&fix),
            summary(&td),
            lit_fix.failures_by_law,
            lit_td.failures.len()
        ),
    );
}

fn criterion9(gate: &mut Gate) {
    let cfg = config(C9_ROUND_TRIPS);
    let sig = Signature::small();
    let mut round_trips = 0usize;
    let mut broken = Vec::new();
    for i in 0..C9_ROUND_TRIPS {
        let st = gen_strategy(&cfg, i, Stream::Left);
        let t = gen_term(&cfg, i);
        let e = psi(&st, &t).unwrap();
        let ok = parse_strategy(&st.to_string()).ok() == Some(st.clone())
            && from_json(&to_json(&st)).ok() == Some(st.clone())
            && parse_term(&t.to_string()).ok() == Some(t.clone())
            && parse_pos_ce(&e.to_string()).map(|p| eq_pos(&p, &e) && p == e).unwrap_or(false);
        round_trips += 1;
        if !ok {
            broken.push(i);
        }
    }
    let contexts_ok = all_terms(&sig, 1).len() == 8
        && ["[]", "f([])", "g(a, f([]))", "list(list([], j), i)"]
            .iter()
            .all(|c| parse_context(c).unwrap().to_string() == *c);
    let mut differing = Vec::new();
    for suite in Suite::ALL {
        let cases = if suite == Suite::TopDown { 3 } else { C9_CASES };
        let c = GenConfig {
            cases,
            seed: 7,
            max_strategy_depth: if suite == Suite::Algebra { C6_STRATEGY_DEPTH } else { 4 },
            ..GenConfig::default()
        };
        if run_suite(suite, &c).to_json() != run_suite(suite, &c).to_json() {
            differing.push(suite.name());
        }
    }
    let holds = broken.is_empty() && contexts_ok && differing.is_empty();
    gate.line(
        9,
        Expect::Pass,
        holds,
        true,
        format!(
            "{round_trips} round trips, broken {broken:?}; contexts = {contexts_ok}; suites with differing reruns {differing:?}"
        ),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate {
        unexpected: 0,
        engine: EngineStats::default(),
        monotone_failures: 0,
    };
    criterion1(&mut gate);
    criterion2(&mut gate);
    criterion3(&mut gate);
    criterion4(&mut gate);
    criterion5(&mut gate);
    criterion6(&mut gate);
    criterion7(&mut gate);
    criterion8(&mut gate);
    criterion9(&mut gate);
    if gate.unexpected == 0 {
        println!("acceptance: every criterion matches its expectation");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria depart from their expectation", gate.unexpected);
        ExitCode::FAILURE
    }
}
