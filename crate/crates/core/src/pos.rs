//! Position-based strategies: finite lists of context insertions at fixed positions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::PosError;
use crate::strategy::{Entry, Index, Outcome, Strategy};
use crate::term::{Context, MergeMode, Position, Term};

/// A position-based strategy: failure, or a non-empty list of insertions
/// applied in list order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PosCe {
    Fail,
    List(Vec<(Position, Context)>),
}

impl PosCe {
    /// `[@p.τ]`.
    pub fn single(p: Position, c: Context) -> PosCe {
        PosCe::List(vec![(p, c)])
    }

    /// A list, or `Fail` when `entries` is empty.
    pub fn from_entries(entries: Vec<(Position, Context)>) -> PosCe {
        if entries.is_empty() {
            PosCe::Fail
        } else {
            PosCe::List(entries)
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, PosCe::Fail)
    }

    pub fn entries(&self) -> &[(Position, Context)] {
        match self {
            PosCe::Fail => &[],
            PosCe::List(es) => es,
        }
    }

    /// `@i.E`: every position gets `i` prepended.
    pub fn prefixed(&self, i: usize) -> PosCe {
        match self {
            PosCe::Fail => PosCe::Fail,
            PosCe::List(es) => PosCe::List(es.iter().map(|(p, c)| (p.prefixed(i), c.clone())).collect()),
        }
    }

    /// The equivalent strategy: entries are grouped by first index into nested
    /// conjunctions, with the root insertion last.
    pub fn to_strategy(&self) -> Strategy {
        fn build(entries: &[(Position, Context)]) -> Strategy {
            let mut groups: Vec<(usize, Vec<(Position, Context)>)> = Vec::new();
            let mut root = None;
            for (p, c) in entries {
                match p.split_first() {
                    None => root = Some(c.clone()),
                    Some((i, rest)) => match groups.iter_mut().find(|(j, _)| *j == i) {
                        Some((_, g)) => g.push((rest, c.clone())),
                        None => groups.push((i, vec![(rest, c.clone())])),
                    },
                }
            }
            if groups.is_empty() {
                return Strategy::insert(root.expect("non-empty entry list"));
            }
            let mut es: Vec<Entry> = groups.iter().map(|(i, g)| Entry::nat(*i, build(g))).collect();
            if let Some(c) = root {
                es.push(Entry::new(Index::Eps, Strategy::insert(c)));
            }
            Strategy::conj(es)
        }
        match self {
            PosCe::Fail => Strategy::fail(),
            PosCe::List(es) => build(es),
        }
    }
}

impl fmt::Display for PosCe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosCe::Fail => f.write_str("fail"),
            PosCe::List(es) => {
                f.write_str("[")?;
                for (k, (p, c)) in es.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "@{p}.<{c}>")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Checks that positions are distinct and that no entry's position is a
/// proper prefix of a later entry's position.
pub fn is_well_founded(e: &PosCe) -> Result<(), PosError> {
    let es = e.entries();
    for i in 0..es.len() {
        for j in i + 1..es.len() {
            if es[i].0 == es[j].0 {
                return Err(PosError::DuplicatePosition {
                    first: i,
                    second: j,
                    position: es[i].0.clone(),
                });
            }
            if es[i].0.is_strict_ancestor_of(&es[j].0) {
                return Err(PosError::AncestorFirst {
                    first: i,
                    second: j,
                    ancestor: es[i].0.clone(),
                    descendant: es[j].0.clone(),
                });
            }
        }
    }
    Ok(())
}

/// Sorts entries descendants-first, parallel positions lexicographically.
pub fn canonicalize(e: &PosCe) -> Result<PosCe, PosError> {
    is_well_founded(e)?;
    Ok(match e {
        PosCe::Fail => PosCe::Fail,
        PosCe::List(es) => {
            let mut es = es.clone();
            es.sort_by(|a, b| a.0.cmp(&b.0));
            PosCe::List(es)
        }
    })
}

/// `t[τ[t|p]]_p`, or `None` when `p` is not a position of `t`.
fn insert_at(t: &Term, p: &Position, c: &Context) -> Option<Term> {
    t.update_at(p.indices(), |sub| Some(c.fill(sub.clone())))
}

/// Runs a position-based strategy. Entries whose position is missing are
/// skipped; the whole list fails only when every entry is skipped.
pub fn apply_pos_ce(e: &PosCe, t: &Outcome) -> Outcome {
    let t = t.as_ref()?;
    let es = match e {
        PosCe::Fail => return None,
        PosCe::List(es) => es,
    };
    let mut cur = t.clone();
    let mut any = false;
    for (p, c) in es {
        if let Some(next) = insert_at(&cur, p, c) {
            cur = next;
            any = true;
        }
    }
    any.then_some(cur)
}

/// `E ⊼ E′`: `Fail` absorbs; otherwise entries at a shared position are merged
/// as `τ·τ′` with `E`'s context on the outside, and all other entries are kept.
pub fn unify_pos(e: &PosCe, f: &PosCe, mode: MergeMode) -> Result<PosCe, PosError> {
    is_well_founded(e)?;
    is_well_founded(f)?;
    let (es, fs) = match (e, f) {
        (PosCe::Fail, _) | (_, PosCe::Fail) => return Ok(PosCe::Fail),
        (PosCe::List(es), PosCe::List(fs)) => (es, fs),
    };
    let mut merged: BTreeMap<Position, Context> = es.iter().cloned().collect();
    for (p, c) in fs {
        let next = match merged.get(p) {
            Some(left) => left.merge(c, mode),
            None => c.clone(),
        };
        merged.insert(p.clone(), next);
    }
    Ok(PosCe::List(merged.into_iter().collect()))
}

/// `E ⊻ E′`: unification when both succeed, otherwise whichever side is not `Fail`.
pub fn combine_pos(e: &PosCe, f: &PosCe, mode: MergeMode) -> Result<PosCe, PosError> {
    match (e, f) {
        (PosCe::Fail, PosCe::Fail) => Ok(PosCe::Fail),
        (PosCe::Fail, other) | (other, PosCe::Fail) => canonicalize(other),
        _ => unify_pos(e, f, mode),
    }
}

/// Equality up to permutation of entries at parallel positions.
pub fn eq_pos(e: &PosCe, f: &PosCe) -> bool {
    match (canonicalize(e), canonicalize(f)) {
        (Ok(a), Ok(b)) => a == b,
        _ => e == f,
    }
}
