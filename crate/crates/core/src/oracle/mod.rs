//! Differential suites: each case draws its inputs from a seeded stream,
//! computes both sides of a law and records any disagreement together with
//! everything needed to replay it.
//!
//! Suites run their cases in parallel. A report depends only on the
//! configuration: cases are keyed by index and merged in index order.

mod gen;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::UnifyError;
use crate::pos::{apply_pos_ce, combine_pos, eq_pos, is_well_founded, unify_pos, PosCe};
use crate::psi::psi_with;
use crate::strategy::{alpha_rename, eval_with, iterate, MuBound, unfold_uniform, validate, Namer, Outcome, Strategy};
use crate::term::{Context, MergeMode, Signature, Term};
use crate::unify::{EngineOptions, EngineStats, FocusOrder, Session};

pub use gen::{
    all_terms, gen_strategy, gen_term, random_context, random_mu_body, random_pattern, random_strategy, random_term,
    GenConfig, Stream,
};

/// Terms drawn per case by the suites that sample terms.
pub const TERMS_PER_CASE: usize = 4;

/// Stack size of the suite worker threads. Evaluation and the engine recurse
/// over strategies and pre-strategies.
const WORKER_STACK: usize = 64 << 20;

/// The available suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// `⟦Ψ_t(S)⟧(t) = ⟦S⟧(t)`.
    Homomorphism,
    /// `Ψ_t(S ⊼ R) = Ψ_t(S) ⊼ Ψ_t(R)`.
    Theorem1,
    /// `Ψ_t(S ⊻ R) = Ψ_t(S) ⊻ Ψ_t(R)`.
    Theorem2,
    /// `S ⊼ R ≡ₙ unfold(S, n) ⊼ unfold(R, n)` for `n ∈ {0, 1, 2}`.
    Unfold,
    /// As [`Suite::Unfold`] with the unfoldings taken at `n + 1`.
    UnfoldShifted,
    /// Associativity, neutral and absorbing elements, congruence, non-degeneracy and idempotence.
    Algebra,
    /// `eval(mu^(depth(t)+m) X. T, t) = eval(mu X. T, t)` for `m ∈ {0, 1, 2, 3}`.
    Fixpoint,
    /// Top-down traversal against a direct recursive replay on every term of depth at most 3.
    TopDown,
    /// Normal forms under the two focus orders agree on sampled terms.
    Confluence,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Homomorphism,
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Unfold,
        Suite::UnfoldShifted,
        Suite::Algebra,
        Suite::Fixpoint,
        Suite::TopDown,
        Suite::Confluence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Homomorphism => "homomorphism",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Unfold => "unfold",
            Suite::UnfoldShifted => "unfold-shifted",
            Suite::Algebra => "algebra",
            Suite::Fixpoint => "fixpoint",
            Suite::TopDown => "topdown",
            Suite::Confluence => "confluence",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// One disagreement, with the inputs in the text syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub index: usize,
    pub law: String,
    pub inputs: BTreeMap<String, String>,
    pub expected: String,
    pub got: String,
}

/// A law that must not hold, with the instance refuting it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub law: String,
    pub left: String,
    pub right: String,
    /// A term on which the two sides differ; `None` means the law held.
    pub witness: Option<String>,
}

/// Outcome of a suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub cases: usize,
    /// Number of individual comparisons.
    pub checks: usize,
    /// Failures per law.
    pub failures_by_law: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<Counterexample>,
    /// Engine counters summed over all sessions of the run.
    pub engine: EngineStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Failures of the laws whose name starts with `prefix`.
    pub fn failures_of(&self, prefix: &str) -> usize {
        self.failures_by_law
            .iter()
            .filter(|(law, _)| law.starts_with(prefix))
            .map(|(_, n)| n)
            .sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// What one case produced.
#[derive(Debug, Default)]
pub struct CaseResult {
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub engine: EngineStats,
}

/// Per-case state: the inputs recorded so far, the checks and the failures.
struct Case {
    index: usize,
    bound: MuBound,
    inputs: BTreeMap<String, String>,
    out: CaseResult,
}

impl Case {
    fn new(index: usize, bound: MuBound) -> Case {
        Case {
            index,
            bound,
            inputs: BTreeMap::new(),
            out: CaseResult::default(),
        }
    }

    fn input(&mut self, key: &str, value: impl fmt::Display) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    /// Counts one comparison and records a failure when `expected != got`.
    fn check<T: PartialEq + fmt::Display>(&mut self, law: &str, extra: &[(&str, String)], expected: T, got: T) -> bool {
        self.check_by(law, extra, &expected, &got, |a, b| a == b)
    }

    fn check_by<T: fmt::Display>(
        &mut self,
        law: &str,
        extra: &[(&str, String)],
        expected: &T,
        got: &T,
        same: impl Fn(&T, &T) -> bool,
    ) -> bool {
        self.out.checks += 1;
        if same(expected, got) {
            return true;
        }
        self.fail(law, extra, expected.to_string(), got.to_string());
        false
    }

    fn fail(&mut self, law: &str, extra: &[(&str, String)], expected: String, got: String) {
        let mut inputs = self.inputs.clone();
        for (k, v) in extra {
            inputs.insert(k.to_string(), v.clone());
        }
        self.out.failures.push(Failure {
            index: self.index,
            law: law.to_string(),
            inputs,
            expected,
            got,
        });
    }

    fn absorb(&mut self, session: &Session) {
        let s = session.stats();
        self.out.engine.unifications += s.unifications;
        self.out.engine.steps += s.steps;
        self.out.engine.measure_violations += s.measure_violations;
    }

    /// Records an engine error as a failure of `law`.
    fn engine<T>(&mut self, law: &str, r: Result<T, UnifyError>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.out.checks += 1;
                self.fail(law, &[], "normal form".into(), e.to_string());
                None
            }
        }
    }
}

/// A displayable outcome: the term or `FAIL`.
struct Shown(Outcome);

impl fmt::Display for Shown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Some(t) => write!(f, "{t}"),
            None => f.write_str("FAIL"),
        }
    }
}

impl PartialEq for Shown {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

fn run(bound: MuBound, s: &Strategy, t: &Term) -> Shown {
    Shown(eval_with(s, t, bound).expect("suite strategies are closed"))
}

fn compile(bound: MuBound, s: &Strategy, t: &Term) -> PosCe {
    psi_with(s, t, bound).expect("suite strategies are closed")
}

/// Engine options for results that run on terms over the configured signature.
pub fn engine_options(cfg: &GenConfig) -> EngineOptions {
    EngineOptions {
        merge_mode: cfg.merge_mode,
        check_measure: true,
        ..EngineOptions::for_signature(&cfg.signature)
    }
}

fn session(cfg: &GenConfig) -> Session {
    Session::new(engine_options(cfg))
}

fn case_terms(cfg: &GenConfig, index: usize) -> Vec<Term> {
    let mut rng = cfg.rng(index, Stream::Term);
    (0..TERMS_PER_CASE)
        .map(|_| random_term(&cfg.signature, cfg.max_term_depth, &mut rng))
        .collect()
}

/// Checks `⟦Ψ_t(S)⟧(t) = ⟦S⟧(t)` and that `Ψ_t(S)` is well-founded.
fn homomorphism(case: &mut Case, name: &str, s: &Strategy, t: &Term) {
    let e = compile(case.bound, s, t);
    let extra = [("term", t.to_string()), ("checked", name.to_string())];
    case.check_by("homomorphism-wf", &extra, &e, &e, |e, _| is_well_founded(e).is_ok());
    let via_psi = Shown(apply_pos_ce(&e, &Some(t.clone())));
    case.check("homomorphism", &extra, run(case.bound, s, t), via_psi);
}

/// Checks that an engine output is closed and monotone.
fn monotone(case: &mut Case, u: &Strategy) {
    let v = validate(u);
    case.check_by("monotone", &[("output", u.to_string())], &u, &u, |_, _| v.closed && v.monotone);
}

/// Eval-level agreement of `a` and `b` on `terms`; returns the first witness.
fn disagreement(bound: MuBound, a: &Strategy, b: &Strategy, terms: &[Term]) -> Option<(Term, Shown, Shown)> {
    terms.iter().find_map(|t| {
        let (x, y) = (run(bound, a, t), run(bound, b, t));
        (x != y).then(|| (t.clone(), x, y))
    })
}

fn equivalent(case: &mut Case, law: &str, a: &Strategy, b: &Strategy, terms: &[Term]) {
    case.out.checks += 1;
    if let Some((t, x, y)) = disagreement(case.bound, a, b, terms) {
        case.fail(
            law,
            &[("witness", t.to_string()), ("lhs", a.to_string()), ("rhs", b.to_string())],
            x.to_string(),
            y.to_string(),
        );
    }
}

fn case_homomorphism(cfg: &GenConfig, index: usize) -> CaseResult {
    let mut case = Case::new(index, cfg.mu_bound);
    let s = gen_strategy(cfg, index, Stream::Left);
    case.input("strategy", &s);
    for t in case_terms(cfg, index) {
        homomorphism(&mut case, "strategy", &s, &t);
    }
    case.out
}

fn case_theorem(cfg: &GenConfig, index: usize, combination: bool) -> CaseResult {
    let mut case = Case::new(index, cfg.mu_bound);
    let s = gen_strategy(cfg, index, Stream::Left);
    let r = gen_strategy(cfg, index, Stream::Right);
    case.input("left", &s);
    case.input("right", &r);
    let mut sess = session(cfg);
    let result = if combination { sess.combine(&s, &r) } else { sess.unify(&s, &r) };
    case.absorb(&sess);
    let Some(u) = case.engine("measure", result) else {
        return case.out;
    };
    monotone(&mut case, &u);
    let law = if combination { "theorem2" } else { "theorem1" };
    for t in case_terms(cfg, index) {
        let (ps, pr) = (compile(case.bound, &s, &t), compile(case.bound, &r, &t));
        let rhs = if combination {
            combine_pos(&ps, &pr, cfg.merge_mode)
        } else {
            unify_pos(&ps, &pr, cfg.merge_mode)
        }
        .expect("psi results are well-founded");
        let lhs = compile(case.bound, &u, &t);
        case.check_by(law, &[("term", t.to_string()), ("result", u.to_string())], &rhs, &lhs, eq_pos);
        homomorphism(&mut case, "result", &u, &t);
    }
    case.out
}

fn case_unfold(cfg: &GenConfig, index: usize, shift: usize) -> CaseResult {
    let mut case = Case::new(index, cfg.mu_bound);
    let s = gen_strategy(cfg, index, Stream::Left);
    let r = gen_strategy(cfg, index, Stream::Right);
    case.input("left", &s);
    case.input("right", &r);
    let mut sess = session(cfg);
    let direct = sess.unify(&s, &r);
    let Some(direct) = case.engine("measure", direct) else {
        case.absorb(&sess);
        return case.out;
    };
    monotone(&mut case, &direct);
    for n in 0..=2 {
        let (us, ur) = (unfold_uniform(&s, n + shift), unfold_uniform(&r, n + shift));
        let unfolded = sess.unify(&us, &ur);
        let Some(unfolded) = case.engine("measure", unfolded) else {
            continue;
        };
        equivalent(&mut case, &format!("unfold-n{n}"), &direct, &unfolded, &all_terms(&cfg.signature, n));
    }
    case.absorb(&sess);
    case.out
}

/// Compares `S ⊼ R` with `unfold(S, n) ⊼ unfold(R, n)` on every term of
/// depth at most `n`, returning the first term on which they differ.
pub fn check_unfold_oracle(s: &Strategy, r: &Strategy, n: usize, cfg: &GenConfig) -> Result<Option<Term>, UnifyError> {
    let mut sess = session(cfg);
    let direct = sess.unify(s, r)?;
    let unfolded = sess.unify(&unfold_uniform(s, n), &unfold_uniform(r, n))?;
    Ok(disagreement(cfg.mu_bound, &direct, &unfolded, &all_terms(&cfg.signature, n)).map(|w| w.0))
}

/// The depth bound of the algebra suite's equivalences.
pub const ALGEBRA_DEPTH: usize = 2;

fn case_algebra(cfg: &GenConfig, index: usize) -> CaseResult {
    let mut case = Case::new(index, cfg.mu_bound);
    let s = gen_strategy(cfg, index, Stream::Left);
    let r = gen_strategy(cfg, index, Stream::Right);
    let q = gen_strategy(cfg, index, Stream::Third);
    case.input("s", &s);
    case.input("r", &r);
    case.input("q", &q);
    let terms = all_terms(&cfg.signature, ALGEBRA_DEPTH);
    let mut sess = session(cfg);
    let run_all = |sess: &mut Session, case: &mut Case| -> Option<()> {
        let sr = case.engine("measure", sess.unify(&s, &r))?;
        let rq = case.engine("measure", sess.unify(&r, &q))?;
        let left = case.engine("measure", sess.unify(&sr, &q))?;
        let right = case.engine("measure", sess.unify(&s, &rq))?;
        monotone(case, &sr);
        equivalent(case, "assoc-unify", &left, &right, &terms);

        let csr = case.engine("measure", sess.combine(&s, &r))?;
        let crq = case.engine("measure", sess.combine(&r, &q))?;
        let left = case.engine("measure", sess.combine(&csr, &q))?;
        let right = case.engine("measure", sess.combine(&s, &crq))?;
        equivalent(case, "assoc-combine", &left, &right, &terms);

        let hole = Strategy::insert(Context::hole());
        let l = case.engine("measure", sess.unify(&hole, &s))?;
        equivalent(case, "neutral-unify", &l, &s, &terms);
        let l = case.engine("measure", sess.unify(&s, &hole))?;
        equivalent(case, "neutral-unify", &l, &s, &terms);
        let l = case.engine("measure", sess.combine(&s, &Strategy::fail()))?;
        equivalent(case, "neutral-combine", &l, &s, &terms);
        let l = case.engine("measure", sess.combine(&Strategy::fail(), &s))?;
        equivalent(case, "neutral-combine", &l, &s, &terms);
        let l = case.engine("measure", sess.unify(&Strategy::fail(), &s))?;
        equivalent(case, "absorbing-unify", &l, &Strategy::fail(), &terms);
        let l = case.engine("measure", sess.unify(&s, &Strategy::fail()))?;
        equivalent(case, "absorbing-unify", &l, &Strategy::fail(), &terms);

        let variant = alpha_rename(&s, &mut Namer::new());
        let l = case.engine("measure", sess.unify(&variant, &r))?;
        equivalent(case, "congruence", &l, &sr, &terms);

        for t in &terms {
            let joint = compile(case.bound, &sr, t) == PosCe::Fail;
            let either = compile(case.bound, &s, t) == PosCe::Fail || compile(case.bound, &r, t) == PosCe::Fail;
            case.check("non-degenerate", &[("term", t.to_string())], either, joint);
        }
        Some(())
    };
    run_all(&mut sess, &mut case);
    case.absorb(&sess);

    let mut project = Session::new(EngineOptions {
        merge_mode: MergeMode::LeftProject,
        ..engine_options(cfg)
    });
    if let Some(ss) = case.engine("measure", project.unify(&s, &s)) {
        equivalent(&mut case, "idempotence-leftproject", &ss, &s, &terms);
    }
    case.absorb(&project);
    case.out
}

/// Laws that fail under [`MergeMode::Nest`], with the refuting instances.
pub fn nest_counterexamples(sig: &Signature) -> Vec<Counterexample> {
    let parse = |src: &str| crate::syntax::parse_strategy(src).expect("fixed instances parse");
    let terms = all_terms(sig, ALGEBRA_DEPTH);
    let mut sess = Session::new(EngineOptions {
        merge_mode: MergeMode::Nest,
        ..EngineOptions::for_signature(sig)
    });
    let mut out = Vec::new();
    let s = parse("ins <f([])>");
    let ss = sess.unify(&s, &s).expect("fixed instances unify");
    out.push(Counterexample {
        law: "idempotence-nest".into(),
        left: ss.to_string(),
        right: s.to_string(),
        witness: disagreement(MuBound::default(), &ss, &s, &terms).map(|w| w.0.to_string()),
    });
    let r = parse("ins <g([], a)>");
    let sr = sess.unify(&s, &r).expect("fixed instances unify");
    let rs = sess.unify(&r, &s).expect("fixed instances unify");
    out.push(Counterexample {
        law: "commutativity-nest".into(),
        left: sr.to_string(),
        right: rs.to_string(),
        witness: disagreement(MuBound::default(), &sr, &rs, &terms).map(|w| w.0.to_string()),
    });
    out
}

fn case_fixpoint(cfg: &GenConfig, index: usize) -> CaseResult {
    let mut case = Case::new(index, cfg.mu_bound);
    let mut rng = cfg.rng(index, Stream::Left);
    let body = random_mu_body(&cfg.signature, "X", cfg.max_strategy_depth, cfg.max_mu_nesting, &mut rng);
    let mu = Strategy::mu("X", body.clone());
    case.input("strategy", &mu);
    for t in case_terms(cfg, index) {
        let reference = run(case.bound, &mu, &t);
        for m in 0..=3 {
            let approx = iterate("X", &body, t.depth() + m);
            case.check(&format!("fixpoint-m{m}"), &[("term", t.to_string())], reference.to_string(), run(case.bound, &approx, &t).to_string());
        }
    }
    case.out
}

/// The depth bound of the top-down replay.
pub const TOPDOWN_DEPTH: usize = 3;

/// Top-down traversal computed directly: `s` at the root if it succeeds,
/// otherwise the traversal of every child, failing when no child succeeds.
fn replay_top_down(bound: MuBound, s: &Strategy, t: &Term) -> Outcome {
    if let Some(r) = eval_with(s, t, bound).expect("closed") {
        return Some(r);
    }
    let Term::App(f, args) = t else { return None };
    let mut hit = false;
    let args = args
        .iter()
        .map(|a| match replay_top_down(bound, s, a) {
            Some(r) => {
                hit = true;
                r
            }
            None => a.clone(),
        })
        .collect();
    hit.then(|| Term::App(f.clone(), args))
}

fn case_top_down(cfg: &GenConfig, index: usize, terms: &[Term]) -> CaseResult {
    let mut case = Case::new(index, cfg.mu_bound);
    let s = gen_strategy(cfg, index, Stream::Left);
    let td = Strategy::top_down(s.clone(), "TD");
    case.input("strategy", &s);
    for t in terms {
        case.check("topdown", &[("term", t.to_string())], Shown(replay_top_down(case.bound, &s, t)), run(case.bound, &td, t));
    }
    case.out
}

fn case_confluence(cfg: &GenConfig, index: usize) -> CaseResult {
    let mut case = Case::new(index, cfg.mu_bound);
    let s = gen_strategy(cfg, index, Stream::Left);
    let r = gen_strategy(cfg, index, Stream::Right);
    case.input("left", &s);
    case.input("right", &r);
    let mut outer = session(cfg);
    let mut inner = Session::new(EngineOptions {
        focus: FocusOrder::RightmostInnermost,
        ..engine_options(cfg)
    });
    let a = case.engine("measure", outer.unify(&s, &r));
    let b = case.engine("measure", inner.unify(&s, &r));
    case.absorb(&outer);
    case.absorb(&inner);
    if let (Some(a), Some(b)) = (a, b) {
        equivalent(&mut case, "confluence", &a, &b, &case_terms(cfg, index));
    }
    case.out
}

/// Runs case `index` of `suite` on its own.
pub fn run_case(suite: Suite, cfg: &GenConfig, index: usize) -> CaseResult {
    match suite {
        Suite::Homomorphism => case_homomorphism(cfg, index),
        Suite::Theorem1 => case_theorem(cfg, index, false),
        Suite::Theorem2 => case_theorem(cfg, index, true),
        Suite::Unfold => case_unfold(cfg, index, 0),
        Suite::UnfoldShifted => case_unfold(cfg, index, 1),
        Suite::Algebra => case_algebra(cfg, index),
        Suite::Fixpoint => case_fixpoint(cfg, index),
        Suite::TopDown => case_top_down(cfg, index, &all_terms(&cfg.signature, TOPDOWN_DEPTH)),
        Suite::Confluence => case_confluence(cfg, index),
    }
}

/// Runs `cfg.cases` cases of `suite` in parallel and merges them in index order.
pub fn run_suite(suite: Suite, cfg: &GenConfig) -> Report {
    let pool = rayon::ThreadPoolBuilder::new()
        .stack_size(WORKER_STACK)
        .build()
        .expect("thread pool");
    let topdown_terms = (suite == Suite::TopDown).then(|| all_terms(&cfg.signature, TOPDOWN_DEPTH));
    let results: Vec<CaseResult> = pool.install(|| {
        (0..cfg.cases)
            .into_par_iter()
            .map(|i| match &topdown_terms {
                Some(terms) => case_top_down(cfg, i, terms),
                None => run_case(suite, cfg, i),
            })
            .collect()
    });
    let mut report = Report {
        suite,
        seed: cfg.seed,
        cases: cfg.cases,
        checks: 0,
        failures_by_law: BTreeMap::new(),
        failures: Vec::new(),
        counterexamples: Vec::new(),
        engine: EngineStats::default(),
        wall_time_ms: None,
    };
    for r in results {
        report.checks += r.checks;
        report.engine.unifications += r.engine.unifications;
        report.engine.steps += r.engine.steps;
        report.engine.measure_violations += r.engine.measure_violations;
        report.failures.extend(r.failures);
    }
    if suite == Suite::Algebra {
        report.counterexamples = nest_counterexamples(&cfg.signature);
        for c in &report.counterexamples {
            report.checks += 1;
            if c.witness.is_none() {
                report.failures.push(Failure {
                    index: usize::MAX,
                    law: c.law.clone(),
                    inputs: BTreeMap::from([("left".into(), c.left.clone()), ("right".into(), c.right.clone())]),
                    expected: "a witness".into(),
                    got: "none".into(),
                });
            }
        }
    }
    for f in &report.failures {
        *report.failures_by_law.entry(f.law.clone()).or_default() += 1;
    }
    report
}
