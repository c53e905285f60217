//! Static checks required by the unification engine.

use serde::Serialize;

use super::{check_conjunction, Index, Kind, Strategy};
use crate::term::Name;

/// Outcome of [`validate`], with one human-readable line per violation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Validation {
    /// No free fixed-point variables.
    pub closed: bool,
    /// Each bound variable occurs below a numeric jump or `most` within its binder.
    pub monotone: bool,
    /// Each bound variable occurs exactly once in its binder's body.
    pub linear: bool,
    /// Every conjunction has distinct indices and a trailing root insertion at most.
    pub well_founded: bool,
    pub diagnostics: Vec<String>,
}

impl Validation {
    /// Closed, monotone, linear and well-founded.
    pub fn ok(&self) -> bool {
        self.closed && self.monotone && self.linear && self.well_founded
    }

    /// Closed, monotone and well-founded; linearity is not required.
    pub fn ok_for_engine(&self) -> bool {
        self.closed && self.monotone && self.well_founded
    }
}

struct Scope {
    name: Name,
    guarded: bool,
}

fn walk(s: &Strategy, scopes: &mut Vec<Scope>, v: &mut Validation) {
    match s.kind() {
        Kind::Var(x) => match scopes.iter().rev().find(|sc| &sc.name == x) {
            None => {
                v.closed = false;
                v.diagnostics.push(format!("{x} is free"));
            }
            Some(sc) => {
                if !sc.guarded {
                    v.monotone = false;
                    v.diagnostics
                        .push(format!("{x} occurs without a numeric jump or most above it"));
                }
            }
        },
        Kind::Mu(x, body) => {
            let n = body.count_free(x);
            if n != 1 {
                v.linear = false;
                v.diagnostics
                    .push(format!("{x} occurs {n} times in its body, expected exactly once"));
            }
            scopes.push(Scope {
                name: x.clone(),
                guarded: false,
            });
            walk(body, scopes, v);
            scopes.pop();
        }
        Kind::Conj(entries) => {
            if let Err(reason) = check_conjunction(entries) {
                v.well_founded = false;
                v.diagnostics.push(format!("conjunction `{s}`: {reason}"));
            }
            for e in entries {
                if matches!(e.idx, Index::Nat(_)) {
                    let saved: Vec<bool> = scopes.iter().map(|sc| sc.guarded).collect();
                    scopes.iter_mut().for_each(|sc| sc.guarded = true);
                    walk(&e.body, scopes, v);
                    scopes.iter_mut().zip(saved).for_each(|(sc, g)| sc.guarded = g);
                } else {
                    walk(&e.body, scopes, v);
                }
            }
        }
        Kind::Most(body) => {
            let saved: Vec<bool> = scopes.iter().map(|sc| sc.guarded).collect();
            scopes.iter_mut().for_each(|sc| sc.guarded = true);
            walk(body, scopes, v);
            scopes.iter_mut().zip(saved).for_each(|(sc, g)| sc.guarded = g);
        }
        _ => {
            for c in s.children() {
                walk(c, scopes, v);
            }
        }
    }
}

/// Checks closedness, monotonicity, linearity and conjunction shape.
pub fn validate(s: &Strategy) -> Validation {
    let mut v = Validation {
        closed: true,
        monotone: true,
        linear: true,
        well_founded: true,
        diagnostics: Vec::new(),
    };
    walk(s, &mut Vec::new(), &mut v);
    v
}
