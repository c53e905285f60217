//! Bounded semantic equivalence, decided relative to a finite set of terms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{eval, Strategy};
use crate::error::StrategyError;
use crate::oracle::random_term;
use crate::term::{Signature, Term};

/// Where [`equiv_upto`] draws its terms from.
#[derive(Clone, Debug)]
pub enum TermSource {
    /// Every ground term up to the depth bound, or a seeded sample of
    /// `max_terms` terms when there are more than that.
    Exhaustive {
        signature: Signature,
        max_terms: usize,
    },
    /// `count` seeded random terms up to the depth bound.
    Sample {
        signature: Signature,
        count: usize,
        seed: u64,
    },
    /// An explicit list; terms deeper than the bound are skipped.
    Terms(Vec<Term>),
}

/// Result of a bounded equivalence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub equivalent: bool,
    /// First term on which the two strategies disagree.
    pub witness: Option<Term>,
    pub terms_checked: usize,
    /// True when an exhaustive source fell back to sampling.
    pub sampled: bool,
}

impl TermSource {
    /// The terms of depth at most `n`, and whether they are a sample.
    pub fn terms(&self, n: usize) -> (Vec<Term>, bool) {
        match self {
            TermSource::Exhaustive {
                signature,
                max_terms,
            } => match signature.terms_up_to(n, *max_terms) {
                Some(ts) => (ts, false),
                None => (sample(signature, *max_terms, 0, n), true),
            },
            TermSource::Sample {
                signature,
                count,
                seed,
            } => (sample(signature, *count, *seed, n), true),
            TermSource::Terms(ts) => (ts.iter().filter(|t| t.depth() <= n).cloned().collect(), false),
        }
    }
}

fn sample(sig: &Signature, count: usize, seed: u64, depth: usize) -> Vec<Term> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_term(sig, depth, &mut rng)).collect()
}

/// Checks `eval(s, t) = eval(r, t)` for every term of depth at most `n` in
/// `source`. A positive answer is only as strong as the term set.
pub fn equiv_upto(s: &Strategy, r: &Strategy, n: usize, source: &TermSource) -> Result<Equivalence, StrategyError> {
    let (terms, sampled) = source.terms(n);
    for (k, t) in terms.iter().enumerate() {
        if eval(s, t)? != eval(r, t)? {
            return Ok(Equivalence {
                equivalent: false,
                witness: Some(t.clone()),
                terms_checked: k + 1,
                sampled,
            });
        }
    }
    Ok(Equivalence {
        equivalent: true,
        witness: None,
        terms_checked: terms.len(),
        sampled,
    })
}
