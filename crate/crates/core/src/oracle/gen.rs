//! Seeded generators for terms, patterns, contexts and strategies.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::strategy::{Entry, Index, MuBound, Strategy};
use crate::term::{Context, Frame, MergeMode, Name, Signature, Term};

/// Parameters shared by all generators and suites.
#[derive(Clone, Debug, Serialize)]
pub struct GenConfig {
    #[serde(serialize_with = "signature_text")]
    pub signature: Signature,
    pub max_term_depth: usize,
    pub max_strategy_depth: usize,
    pub max_mu_nesting: usize,
    pub seed: u64,
    pub cases: usize,
    pub merge_mode: MergeMode,
    /// Fixed-point bound used by every evaluation and compilation of the suites.
    pub mu_bound: MuBound,
}

fn signature_text<S: serde::Serializer>(sig: &Signature, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(sig)
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            signature: Signature::small(),
            max_term_depth: 3,
            max_strategy_depth: 4,
            max_mu_nesting: 2,
            seed: 0,
            cases: 100,
            merge_mode: MergeMode::Nest,
            mu_bound: MuBound::DepthPlusOne,
        }
    }
}

/// Independent random streams drawn from one configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Term = 0,
    Left = 1,
    Right = 2,
    Third = 3,
}

impl GenConfig {
    /// The generator for case `index` and `stream`. Each pair gets its own
    /// ChaCha stream, so cases are reproducible one by one.
    pub fn rng(&self, index: usize, stream: Stream) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((index as u64) * 4 + stream as u64);
        rng
    }
}

/// A ground term of depth at most `depth`. Leaves are constants of `sig`.
pub fn random_term(sig: &Signature, depth: usize, rng: &mut impl Rng) -> Term {
    let constants = sig.constants();
    assert!(!constants.is_empty(), "the signature needs a constant");
    let symbols: Vec<(Name, usize)> = sig.symbols().filter(|(_, a)| *a > 0).map(|(f, a)| (f.clone(), a)).collect();
    if depth == 0 || symbols.is_empty() || rng.gen_bool(0.3) {
        return Term::App(constants.choose(rng).unwrap().clone(), vec![]);
    }
    let (f, a) = symbols.choose(rng).unwrap().clone();
    Term::App(f, (0..a).map(|_| random_term(sig, depth - 1, rng)).collect())
}

/// The `index`-th term of the configured stream.
pub fn gen_term(cfg: &GenConfig, index: usize) -> Term {
    random_term(&cfg.signature, cfg.max_term_depth, &mut cfg.rng(index, Stream::Term))
}

/// All ground terms of depth at most `depth`.
///
/// # Panics
/// If there are more than a million of them.
pub fn all_terms(sig: &Signature, depth: usize) -> Vec<Term> {
    sig.terms_up_to(depth, 1_000_000).expect("term set is too large to enumerate")
}

/// A pattern of depth at most `depth` whose root is a symbol. Variables are
/// `?x0`, `?x1`, … and may repeat.
pub fn random_pattern(sig: &Signature, depth: usize, rng: &mut impl Rng) -> Term {
    fn go(sig: &Signature, depth: usize, rng: &mut impl Rng, root: bool) -> Term {
        if !root && rng.gen_bool(0.5) {
            return Term::var(&format!("x{}", rng.gen_range(0..3)));
        }
        let all: Vec<(Name, usize)> = sig.symbols().map(|(f, a)| (f.clone(), a)).collect();
        let pick: Vec<&(Name, usize)> = all.iter().filter(|(_, a)| depth > 0 || *a == 0).collect();
        let (f, a) = (*pick.choose(rng).unwrap()).clone();
        Term::App(f, (0..a).map(|_| go(sig, depth.saturating_sub(1), rng, false)).collect())
    }
    go(sig, depth, rng, true)
}

/// A context with one or two frames whose siblings are constants.
pub fn random_context(sig: &Signature, rng: &mut impl Rng) -> Context {
    let symbols: Vec<(Name, usize)> = sig.symbols().filter(|(_, a)| *a > 0).map(|(f, a)| (f.clone(), a)).collect();
    let constants = sig.constants();
    if symbols.is_empty() {
        return Context::hole();
    }
    let frames = if rng.gen_bool(0.25) { 2 } else { 1 };
    let frames = (0..frames)
        .map(|_| {
            let (f, a) = symbols.choose(rng).unwrap().clone();
            let hole = rng.gen_range(0..a);
            let mut leaf = || Term::App(constants.choose(rng).unwrap().clone(), vec![]);
            let left = (0..hole).map(|_| leaf()).collect();
            let right = (hole + 1..a).map(|_| leaf()).collect();
            Frame { symbol: f, left, right }
        })
        .collect();
    Context::from_frames(frames)
}

/// A fixed-point variable that still has to be placed, and whether a
/// numeric jump or `most` has been crossed since its binder.
#[derive(Clone, Debug)]
struct Pending {
    name: Name,
    guarded: bool,
}

struct StrategyGen<'a, R: Rng> {
    sig: &'a Signature,
    rng: &'a mut R,
    max_nesting: usize,
    next_var: usize,
}

impl<R: Rng> StrategyGen<'_, R> {
    fn insert(&mut self) -> Strategy {
        Strategy::insert(random_context(self.sig, self.rng))
    }

    fn pattern(&mut self) -> Term {
        let d = self.rng.gen_range(0..=2);
        random_pattern(self.sig, d, self.rng)
    }

    fn index(&mut self) -> usize {
        self.rng.gen_range(1..=self.sig.max_arity().max(1))
    }

    fn fresh(&mut self) -> Name {
        let x = Name::from(format!("X{}", self.next_var));
        self.next_var += 1;
        x
    }

    /// A strategy of depth about `depth` in which each variable of `pending`
    /// occurs exactly once, below a numeric jump or `most`.
    fn gen(&mut self, depth: usize, nesting: usize, pending: Vec<Pending>) -> Strategy {
        if pending.is_empty() {
            return self.closed(depth, nesting);
        }
        if pending.len() == 1 && pending[0].guarded && (depth == 0 || self.rng.gen_bool(0.3)) {
            return Strategy::var_named(pending[0].name.clone());
        }
        if depth == 0 {
            return self.place(pending);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..9) {
            0 | 1 => {
                let (l, r) = self.split(pending);
                if self.rng.gen_bool(0.5) {
                    Strategy::choice(self.gen(d, nesting, l), self.gen(d, nesting, r))
                } else {
                    Strategy::choice(self.gen(d, nesting, r), self.gen(d, nesting, l))
                }
            }
            2 => {
                let u = self.pattern();
                Strategy::guard(u, self.gen(d, nesting, pending))
            }
            3 => {
                let c = self.closed(d, nesting);
                Strategy::if_then(c, self.gen(d, nesting, pending))
            }
            4 | 5 => self.conj(d, nesting, pending),
            6 => Strategy::most(self.gen(d, nesting, guard_all(pending))),
            7 if nesting < self.max_nesting => {
                let y = self.fresh();
                let mut inner = pending;
                inner.push(Pending {
                    name: y.clone(),
                    guarded: false,
                });
                Strategy::mu_named(y, self.gen(d, nesting + 1, inner))
            }
            _ => {
                let (l, r) = self.split(pending);
                let base = self.gen(d, nesting, l);
                let step = self.jump(d, nesting, r);
                Strategy::choice(base, step)
            }
        }
    }

    /// A numeric jump or `most` above a strategy placing `pending`.
    fn jump(&mut self, depth: usize, nesting: usize, pending: Vec<Pending>) -> Strategy {
        let body = self.gen(depth, nesting, guard_all(pending));
        if self.rng.gen_bool(0.5) {
            Strategy::most(body)
        } else {
            Strategy::at(self.index(), body)
        }
    }

    /// Places the pending variables without further depth budget.
    fn place(&mut self, pending: Vec<Pending>) -> Strategy {
        let mut parts = pending.into_iter().map(|p| {
            let x = Strategy::var_named(p.name);
            if p.guarded {
                x
            } else if self.rng.gen_bool(0.5) {
                Strategy::most(x)
            } else {
                Strategy::at(self.index(), x)
            }
        });
        let first = parts.next().expect("pending is not empty");
        parts.fold(first, Strategy::choice)
    }

    fn split(&mut self, pending: Vec<Pending>) -> (Vec<Pending>, Vec<Pending>) {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for p in pending {
            if self.rng.gen_bool(0.5) {
                l.push(p);
            } else {
                r.push(p);
            }
        }
        (l, r)
    }

    fn conj(&mut self, depth: usize, nesting: usize, pending: Vec<Pending>) -> Strategy {
        let k = self.sig.max_arity().max(1);
        let mut idx: Vec<usize> = (1..=k).collect();
        idx.shuffle(self.rng);
        let width = self.rng.gen_range(1..=k.min(2));
        let mut idx: Vec<usize> = idx.into_iter().take(width).collect();
        idx.sort_unstable();
        let mut buckets: Vec<Vec<Pending>> = vec![Vec::new(); idx.len()];
        for p in guard_all(pending) {
            let b = self.rng.gen_range(0..buckets.len());
            buckets[b].push(p);
        }
        let mut entries: Vec<Entry> = idx
            .into_iter()
            .zip(buckets)
            .map(|(i, b)| Entry::nat(i, self.gen(depth, nesting, b)))
            .collect();
        if self.rng.gen_bool(0.3) {
            entries.push(Entry::new(Index::Eps, self.insert()));
        }
        Strategy::conj(entries)
    }

    fn closed(&mut self, depth: usize, nesting: usize) -> Strategy {
        if depth == 0 {
            return if self.rng.gen_bool(0.1) { Strategy::fail() } else { self.insert() };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..20) {
            0 => Strategy::fail(),
            1..=3 => self.insert(),
            4..=6 => {
                let u = self.pattern();
                Strategy::guard(u, self.closed(d, nesting))
            }
            7..=9 => Strategy::choice(self.closed(d, nesting), self.closed(d, nesting)),
            10 | 11 => self.conj(d, nesting, vec![]),
            12 => Strategy::at_path(&[], self.closed(d, nesting)),
            13 | 14 => Strategy::most(self.closed(d, nesting)),
            15 => Strategy::if_then(self.closed(d, nesting), self.closed(d, nesting)),
            _ if nesting < self.max_nesting => {
                let x = self.fresh();
                let body = self.gen(
                    d,
                    nesting + 1,
                    vec![Pending {
                        name: x.clone(),
                        guarded: false,
                    }],
                );
                Strategy::mu_named(x, body)
            }
            _ => self.insert(),
        }
    }
}

fn guard_all(pending: Vec<Pending>) -> Vec<Pending> {
    pending
        .into_iter()
        .map(|p| Pending { guarded: true, ..p })
        .collect()
}

/// A closed, monotone, linear strategy with well-formed conjunctions.
pub fn random_strategy(sig: &Signature, depth: usize, max_nesting: usize, rng: &mut impl Rng) -> Strategy {
    StrategyGen {
        sig,
        rng,
        max_nesting,
        next_var: 0,
    }
    .closed(depth, 0)
}

/// A body `T` for `mu X. T`, with `X` placed exactly once below a jump.
pub fn random_mu_body(sig: &Signature, x: &str, depth: usize, max_nesting: usize, rng: &mut impl Rng) -> Strategy {
    StrategyGen {
        sig,
        rng,
        max_nesting,
        next_var: 0,
    }
    .gen(
        depth,
        1,
        vec![Pending {
            name: Name::from(x),
            guarded: false,
        }],
    )
}

/// The `index`-th strategy of `stream`.
pub fn gen_strategy(cfg: &GenConfig, index: usize, stream: Stream) -> Strategy {
    random_strategy(
        &cfg.signature,
        cfg.max_strategy_depth,
        cfg.max_mu_nesting,
        &mut cfg.rng(index, stream),
    )
}
