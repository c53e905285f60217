//! Unification and combination of strategies by a prioritized rewriting system.
//!
//! The engine rewrites a tuple `⟨S, R, M⟩` (pending unification of `S` and `R`
//! under memory `M`) with the highest-priority applicable rule:
//!
//! | rule | redex | result |
//! |------|-------|--------|
//! | 0a/0b | `⟨@eps.S, R⟩` | `⟨S, R⟩` |
//! | 1a/1b | `⟨fail, R⟩` | `fail` |
//! | 2 | `⟨ins τ, ins τ′⟩` | `ins τ·τ′` |
//! | 3a/3b | `⟨u ; S, R⟩` | `u ; ⟨S, R⟩` |
//! | 4a | `⟨@i.S, @i.R⟩` | `@i.⟨S, R⟩` |
//! | 4b | two conjunctions | `if S then if R then [shared @i.(⟨Sᵢ,Rᵢ⟩ + Sᵢ + Rᵢ), S-only, R-only, root]` |
//! | 5a/5b | `⟨S₁ + S₂, R⟩` | `⟨S₁, R⟩ + ⟨S₂, R⟩` |
//! | 6a/6b | `⟨if C then S, R⟩` | `if C then ⟨S, R⟩` |
//! | 7a | `⟨most(S), most(R)⟩` | `if most(S) then if most(R) then most(⟨S, R⟩ + S + R)` |
//! | 7b/7c | `⟨most(S), conjunction⟩` | rule 4b with `most(S)` expanded to `[@1.S, …, @k.S]` |
//! | 8a/8b | `⟨mu X. S, R⟩` | `Z` if `(mu X. S, R, Z)` is remembered, else `mu Z. ⟨S[X := mu X. S], R, M ∪ {(mu X. S, R, Z)}⟩` |
//!
//! In rules 7b/7c, `k` is the arity of the guard pattern known to match at
//! the tuple's position, when there is one, and otherwise the largest arity
//! of the signature (or the largest index of the conjunction, if larger).

mod phi;
mod pre;

use serde::Serialize;

use crate::error::UnifyError;
use crate::strategy::{alpha_rename, simplify, validate, Index, Kind, Namer, Strategy};
use crate::term::{Context, MergeMode, Name, Signature, Term};

pub use phi::{phi, phi_mu, MeasureTriple, PhiCache};
pub use pre::{MemEntry, Memory, PreCe, Tuple};

/// Which tuple [`Session::reduce_step`] rewrites.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FocusOrder {
    #[default]
    LeftmostOutermost,
    RightmostInnermost,
}

/// Engine configuration.
#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Largest arity of the terms the result will run on. `None` uses the
    /// largest arity among the symbols of the two inputs.
    pub max_arity: Option<usize>,
    pub merge_mode: MergeMode,
    /// Apply [`simplify`] to the normal form.
    pub simplify: bool,
    /// Check that every step decreases the measure of the rewritten tuple.
    pub check_measure: bool,
    /// Record one [`TraceStep`] per rewrite.
    pub trace: bool,
    pub focus: FocusOrder,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            max_arity: None,
            merge_mode: MergeMode::Nest,
            simplify: true,
            check_measure: cfg!(debug_assertions),
            trace: false,
            focus: FocusOrder::LeftmostOutermost,
        }
    }
}

impl EngineOptions {
    /// Options for results that run on terms over `sig`.
    pub fn for_signature(sig: &Signature) -> Self {
        EngineOptions {
            max_arity: Some(sig.max_arity()),
            ..EngineOptions::default()
        }
    }
}

/// One rewrite: the rule, the path of the tuple in the pre-strategy, and the
/// measure of the tuple before the step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: &'static str,
    pub path: String,
    pub lambda: usize,
    pub dl: [usize; 2],
    pub dr: [usize; 2],
    pub mem: usize,
}

/// Counters accumulated by a session.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    pub unifications: usize,
    pub steps: usize,
    pub measure_violations: usize,
}

/// A unification session: options, the fresh-variable counter, statistics
/// and the optional trace. Sessions are single-threaded and deterministic.
pub struct Session {
    options: EngineOptions,
    next_fresh: usize,
    namer: Namer,
    arity: usize,
    stats: EngineStats,
    trace: Vec<TraceStep>,
    cache: PhiCache,
}

/// The child-index entries and the root insertion of a conjunction-shaped strategy.
type ListView = (Vec<(usize, Strategy)>, Option<Context>);

fn list_view(s: &Strategy) -> Option<ListView> {
    match s.kind() {
        Kind::Insert(c) => Some((vec![], Some(c.clone()))),
        Kind::Conj(es) => {
            let mut nats = Vec::new();
            let mut root = None;
            for e in es {
                match (e.idx, e.body.kind()) {
                    (Index::Nat(i), _) => nats.push((i, e.body.clone())),
                    (Index::Eps, Kind::Insert(c)) if es.len() > 1 => root = Some(c.clone()),
                    (Index::Eps, _) => return None,
                }
            }
            Some((nats, root))
        }
        _ => None,
    }
}

/// The body of a single root entry `@eps.S`.
fn root_only(s: &Strategy) -> Option<Strategy> {
    match s.kind() {
        Kind::Conj(es) if es.len() == 1 && es[0].idx == Index::Eps => Some(es[0].body.clone()),
        _ => None,
    }
}

/// The single child entry of `@i.S`.
fn single_jump(s: &Strategy) -> Option<(usize, Strategy)> {
    match s.kind() {
        Kind::Conj(es) if es.len() == 1 => match es[0].idx {
            Index::Nat(i) => Some((i, es[0].body.clone())),
            Index::Eps => None,
        },
        _ => None,
    }
}

/// The pattern known below a guard `u ; …`.
fn refine(known: &Option<Term>, u: &Term) -> Option<Term> {
    match u {
        Term::App(..) => Some(u.clone()),
        Term::Var(_) => known.clone(),
    }
}

/// The part of a known pattern at child `i`.
fn shift(known: &Option<Term>, i: usize) -> Option<Term> {
    match known {
        Some(Term::App(_, args)) => match args.get(i.wrapping_sub(1)) {
            Some(sub @ Term::App(..)) => Some(sub.clone()),
            _ => None,
        },
        _ => None,
    }
}

fn max_symbol_arity(s: &Strategy) -> usize {
    let mut sig = Signature::new();
    let _ = crate::syntax::absorb_strategy(&mut sig, s);
    sig.max_arity()
}

impl Default for Session {
    fn default() -> Self {
        Session::new(EngineOptions::default())
    }
}

impl Session {
    pub fn new(options: EngineOptions) -> Session {
        Session {
            options,
            next_fresh: 0,
            namer: Namer::new(),
            arity: 0,
            stats: EngineStats::default(),
            trace: Vec::new(),
            cache: PhiCache::default(),
        }
    }

    pub fn options(&self) -> &EngineOptions {
        &self.options
    }

    pub fn stats(&self) -> &EngineStats {
        &self.stats
    }

    /// The recorded steps since the last call.
    pub fn take_trace(&mut self) -> Vec<TraceStep> {
        std::mem::take(&mut self.trace)
    }

    /// `Z#0`, `Z#1`, …: names that user input cannot contain.
    pub fn fresh_var(&mut self) -> Name {
        let z = Name::from(format!("Z#{}", self.next_fresh));
        self.next_fresh += 1;
        z
    }

    /// The measure of a tuple.
    pub fn measure(&mut self, t: &Tuple) -> MeasureTriple {
        self.cache.measure(&t.left, &t.right, &t.mem)
    }

    /// Rewrites one tuple with its highest-priority rule.
    pub fn step(&mut self, t: &Tuple) -> (&'static str, PreCe) {
        let (l, r) = (&t.left, &t.right);
        let child = |left: Strategy, right: Strategy, pattern: Option<Term>| {
            PreCe::tuple(Tuple {
                left,
                right,
                mem: t.mem.clone(),
                pattern,
            })
        };
        if let Some(body) = root_only(l) {
            return ("0a", child(body, r.clone(), t.pattern.clone()));
        }
        if let Some(body) = root_only(r) {
            return ("0b", child(l.clone(), body, t.pattern.clone()));
        }
        if l.is_fail() {
            return ("1a", PreCe::Done(Strategy::fail()));
        }
        if r.is_fail() {
            return ("1b", PreCe::Done(Strategy::fail()));
        }
        if let (Kind::Insert(a), Kind::Insert(b)) = (l.kind(), r.kind()) {
            return ("2", PreCe::Done(Strategy::insert(a.merge(b, self.options.merge_mode))));
        }
        if let Kind::Guard(u, s) = l.kind() {
            return ("3a", PreCe::Guard(u.clone(), Box::new(child(s.clone(), r.clone(), refine(&t.pattern, u)))));
        }
        if let Kind::Guard(u, s) = r.kind() {
            return ("3b", PreCe::Guard(u.clone(), Box::new(child(l.clone(), s.clone(), refine(&t.pattern, u)))));
        }
        if let (Some((i, s)), Some((j, q))) = (single_jump(l), single_jump(r)) {
            if i == j {
                return ("4a", PreCe::Conj(vec![(Index::Nat(i), child(s, q, shift(&t.pattern, i)))]));
            }
        }
        if let (Some(lv), Some(rv)) = (list_view(l), list_view(r)) {
            return ("4b", self.list_rule(t, lv, rv));
        }
        if let Kind::Choice(a, b) = l.kind() {
            return (
                "5a",
                PreCe::Choice(
                    Box::new(child(a.clone(), r.clone(), t.pattern.clone())),
                    Box::new(child(b.clone(), r.clone(), t.pattern.clone())),
                ),
            );
        }
        if let Kind::Choice(a, b) = r.kind() {
            return (
                "5b",
                PreCe::Choice(
                    Box::new(child(l.clone(), a.clone(), t.pattern.clone())),
                    Box::new(child(l.clone(), b.clone(), t.pattern.clone())),
                ),
            );
        }
        if let Kind::IfThen(c, s) = l.kind() {
            return ("6a", PreCe::IfThen(c.clone(), Box::new(child(s.clone(), r.clone(), t.pattern.clone()))));
        }
        if let Kind::IfThen(c, s) = r.kind() {
            return ("6b", PreCe::IfThen(c.clone(), Box::new(child(l.clone(), s.clone(), t.pattern.clone()))));
        }
        if let (Kind::Most(s), Kind::Most(q)) = (l.kind(), r.kind()) {
            let body = PreCe::Choice(
                Box::new(PreCe::Choice(
                    Box::new(child(s.clone(), q.clone(), None)),
                    Box::new(PreCe::Done(s.clone())),
                )),
                Box::new(PreCe::Done(q.clone())),
            );
            return (
                "7a",
                PreCe::IfThen(l.clone(), Box::new(PreCe::IfThen(r.clone(), Box::new(PreCe::Most(Box::new(body)))))),
            );
        }
        if let (Kind::Most(s), Some(rv)) = (l.kind(), list_view(r)) {
            let k = self.expansion(&t.pattern, &rv);
            if k == 0 {
                return ("7b", PreCe::Done(Strategy::fail()));
            }
            let lv = ((1..=k).map(|i| (i, s.clone())).collect(), None);
            return ("7b", self.list_rule(t, lv, rv));
        }
        if let (Some(lv), Kind::Most(q)) = (list_view(l), r.kind()) {
            let k = self.expansion(&t.pattern, &lv);
            if k == 0 {
                return ("7c", PreCe::Done(Strategy::fail()));
            }
            let rv = ((1..=k).map(|i| (i, q.clone())).collect(), None);
            return ("7c", self.list_rule(t, lv, rv));
        }
        if let Kind::Mu(x, body) = l.kind() {
            return ("8a", self.mu_rule(t, l, x, body, true));
        }
        if let Kind::Mu(x, body) = r.kind() {
            return ("8b", self.mu_rule(t, r, x, body, false));
        }
        unreachable!("tuple components are closed strategies: {l} / {r}")
    }

    /// Number of children `most` expands to next to the conjunction `other`.
    fn expansion(&self, pattern: &Option<Term>, other: &ListView) -> usize {
        match pattern {
            Some(Term::App(_, args)) => args.len(),
            _ => {
                let widest = other.0.iter().map(|(i, _)| *i).max().unwrap_or(0);
                self.arity.max(widest)
            }
        }
    }

    fn list_rule(&mut self, t: &Tuple, lv: ListView, rv: ListView) -> PreCe {
        let (ls, lroot) = lv;
        let (rs, rroot) = rv;
        let mut entries: Vec<(Index, PreCe)> = Vec::new();
        for (i, s) in &ls {
            if let Some((_, q)) = rs.iter().find(|(j, _)| j == i) {
                let joint = PreCe::tuple(Tuple {
                    left: s.clone(),
                    right: q.clone(),
                    mem: t.mem.clone(),
                    pattern: shift(&t.pattern, *i),
                });
                let body = PreCe::Choice(
                    Box::new(PreCe::Choice(Box::new(joint), Box::new(PreCe::Done(s.clone())))),
                    Box::new(PreCe::Done(q.clone())),
                );
                entries.push((Index::Nat(*i), body));
            }
        }
        for (i, s) in &ls {
            if !rs.iter().any(|(j, _)| j == i) {
                entries.push((Index::Nat(*i), PreCe::Done(s.clone())));
            }
        }
        for (j, q) in &rs {
            if !ls.iter().any(|(i, _)| i == j) {
                entries.push((Index::Nat(*j), PreCe::Done(q.clone())));
            }
        }
        let root = match (lroot, rroot) {
            (Some(a), Some(b)) => Some(a.merge(&b, self.options.merge_mode)),
            (a, b) => a.or(b),
        };
        if let Some(c) = root {
            entries.push((Index::Eps, PreCe::Done(Strategy::insert(c))));
        }
        PreCe::IfThen(
            t.left.clone(),
            Box::new(PreCe::IfThen(t.right.clone(), Box::new(PreCe::Conj(entries)))),
        )
    }

    fn mu_rule(&mut self, t: &Tuple, xi: &Strategy, x: &Name, body: &Strategy, left: bool) -> PreCe {
        if let Some(z) = t.mem.lookup(&t.left, &t.right) {
            return PreCe::Done(Strategy::var_named(z.clone()));
        }
        let z = self.fresh_var();
        let mem = t.mem.with(t.left.clone(), t.right.clone(), z.clone());
        let unrolled = body.subst(x, xi);
        let (l, r) = if left {
            (unrolled, t.right.clone())
        } else {
            (t.left.clone(), unrolled)
        };
        PreCe::Mu(
            z,
            Box::new(PreCe::tuple(Tuple {
                left: l,
                right: r,
                mem,
                pattern: None,
            })),
        )
    }

    /// Bookkeeping after rewriting `t` into `out`: statistics, measure check and trace.
    fn account(&mut self, rule: &'static str, t: &Tuple, out: &PreCe, path: &[usize]) -> Result<(), UnifyError> {
        self.stats.steps += 1;
        if !self.options.check_measure && !self.options.trace {
            return Ok(());
        }
        let before = self.measure(t);
        let path_text = if path.is_empty() {
            "eps".to_string()
        } else {
            path.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
        };
        if self.options.trace {
            self.trace.push(TraceStep {
                rule,
                path: path_text.clone(),
                lambda: before.lambda,
                dl: before.delta_left.as_pair(),
                dr: before.delta_right.as_pair(),
                mem: t.mem.len(),
            });
        }
        if self.options.check_measure {
            for (_, c) in out.tuples() {
                let after = self.measure(c);
                if after >= before {
                    self.stats.measure_violations += 1;
                    return Err(UnifyError::MeasureViolation {
                        rule: rule.to_string(),
                        path: path_text,
                        before: format!("{before:?}"),
                        after: format!("{after:?}"),
                    });
                }
            }
        }
        Ok(())
    }

    fn normalize(&mut self, p: PreCe, path: &mut Vec<usize>) -> Result<Strategy, UnifyError> {
        let rebuild = |this: &mut Session, p: PreCe, k: usize, path: &mut Vec<usize>| {
            path.push(k);
            let r = this.normalize(p, path);
            path.pop();
            r
        };
        Ok(match p {
            PreCe::Done(s) => s,
            PreCe::Tuple(t) => {
                let (rule, out) = self.step(&t);
                self.account(rule, &t, &out, path)?;
                self.normalize(out, path)?
            }
            PreCe::Guard(u, q) => Strategy::guard(u, rebuild(self, *q, 0, path)?),
            PreCe::Choice(a, b) => {
                let a = rebuild(self, *a, 0, path)?;
                Strategy::choice(a, rebuild(self, *b, 1, path)?)
            }
            PreCe::Mu(z, q) => Strategy::mu_named(z, rebuild(self, *q, 0, path)?),
            PreCe::Conj(es) => {
                let mut out = Vec::with_capacity(es.len());
                for (k, (i, q)) in es.into_iter().enumerate() {
                    out.push(crate::strategy::Entry::new(i, rebuild(self, q, k, path)?));
                }
                Strategy::conj(out)
            }
            PreCe::Most(q) => Strategy::most(rebuild(self, *q, 0, path)?),
            PreCe::IfThen(c, q) => Strategy::if_then(c, rebuild(self, *q, 0, path)?),
        })
    }

    /// Rewrites the focused tuple of `p` (see [`FocusOrder`]), or returns
    /// `None` when `p` has no tuple left.
    pub fn reduce_step(&mut self, p: &PreCe) -> Result<Option<(&'static str, PreCe)>, UnifyError> {
        let tuples = p.tuples();
        let focus = match self.options.focus {
            FocusOrder::LeftmostOutermost => tuples.first(),
            FocusOrder::RightmostInnermost => tuples.last(),
        };
        let Some((path, t)) = focus else {
            return Ok(None);
        };
        let (path, t) = (path.clone(), (*t).clone());
        let (rule, out) = self.step(&t);
        self.account(rule, &t, &out, &path)?;
        let mut next = p.clone();
        *next.at_path_mut(&path) = out;
        Ok(Some((rule, next)))
    }

    fn prepare(&mut self, s: &Strategy, r: &Strategy) -> Result<(Strategy, Strategy), UnifyError> {
        for (side, x) in [("left", s), ("right", r)] {
            let v = validate(x);
            if !v.ok_for_engine() {
                return Err(UnifyError::ValidationFailure {
                    side,
                    reasons: v.diagnostics.join("; "),
                });
            }
        }
        self.arity = self
            .options
            .max_arity
            .unwrap_or_else(|| max_symbol_arity(s).max(max_symbol_arity(r)));
        self.stats.unifications += 1;
        Ok((alpha_rename(s, &mut self.namer), alpha_rename(r, &mut self.namer)))
    }

    fn finish(&self, out: Strategy) -> Strategy {
        if self.options.simplify {
            simplify(&out)
        } else {
            out
        }
    }

    /// `S ⊼ R`: the normal form of `⟨S, R, ∅⟩`.
    ///
    /// Inputs must be closed, monotone and well-founded. Their bound variables
    /// are renamed apart first.
    pub fn unify(&mut self, s: &Strategy, r: &Strategy) -> Result<Strategy, UnifyError> {
        let (s, r) = self.prepare(s, r)?;
        let start = PreCe::tuple(Tuple::new(s, r));
        let out = match self.options.focus {
            FocusOrder::LeftmostOutermost => self.normalize(start, &mut Vec::new())?,
            FocusOrder::RightmostInnermost => {
                let mut cur = start;
                while let Some((_, next)) = self.reduce_step(&cur)? {
                    cur = next;
                }
                cur.into_strategy().expect("no tuple is left")
            }
        };
        Ok(self.finish(out))
    }

    /// `S ⊻ R = (S ⊼ R) + S + R`.
    pub fn combine(&mut self, s: &Strategy, r: &Strategy) -> Result<Strategy, UnifyError> {
        let u = self.unify(s, r)?;
        Ok(Strategy::choice(Strategy::choice(u, s.clone()), r.clone()))
    }
}

/// `S ⊼ R` in a fresh session with default options.
pub fn unify(s: &Strategy, r: &Strategy) -> Result<Strategy, UnifyError> {
    Session::default().unify(s, r)
}

/// `S ⊻ R` in a fresh session with default options.
pub fn combine(s: &Strategy, r: &Strategy) -> Result<Strategy, UnifyError> {
    Session::default().combine(s, r)
}

/// Same as [`unify`]: the normal form of `⟨S, R, ∅⟩`.
pub fn normal_form(s: &Strategy, r: &Strategy) -> Result<Strategy, UnifyError> {
    unify(s, r)
}
