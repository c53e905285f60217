//! Substitutions, one-way matching and syntactic unification.

use std::collections::BTreeMap;
use std::fmt;

use super::{Name, Term};

/// A finite map from variables to terms. Identity bindings are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `x` to `t`, dropping the binding if it is the identity.
    pub fn bind(&mut self, x: Name, t: Term) {
        if t == Term::Var(x.clone()) {
            self.bindings.remove(&x);
        } else {
            self.bindings.insert(x, t);
        }
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.bindings.get(x)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.bindings.iter()
    }

    /// `σ(t)`.
    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) => self.bindings.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }
}

impl FromIterator<(Name, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Name, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (x, t) in iter {
            s.bind(x, t);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (x, t)) in self.bindings.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {t}")?;
        }
        f.write_str("}")
    }
}

/// `σ(t)`.
pub fn apply_subst(sigma: &Substitution, t: &Term) -> Term {
    sigma.apply(t)
}

/// The unique `σ` with `σ(pattern) = t`, if any.
///
/// Variables of `t` are treated as constants: matching is one-way.
pub fn match_term(pattern: &Term, t: &Term) -> Option<Substitution> {
    let mut bound: BTreeMap<Name, Term> = BTreeMap::new();
    let mut stack = vec![(pattern, t)];
    while let Some((p, s)) = stack.pop() {
        match p {
            Term::Var(x) => match bound.get(x) {
                Some(prev) if prev != s => return None,
                Some(_) => {}
                None => {
                    bound.insert(x.clone(), s.clone());
                }
            },
            Term::App(f, pargs) => match s {
                Term::App(g, sargs) if f == g && pargs.len() == sargs.len() => {
                    stack.extend(pargs.iter().zip(sargs.iter()));
                }
                _ => return None,
            },
        }
    }
    Some(bound.into_iter().collect())
}

/// True when `pattern` matches `t`.
pub fn matches(pattern: &Term, t: &Term) -> bool {
    match_term(pattern, t).is_some()
}

/// Most general unifier of `t` and `u` with occurs check.
///
/// The returned substitution is idempotent: no bound variable occurs in the
/// range of the substitution.
pub fn mgu(t: &Term, u: &Term) -> Option<Substitution> {
    let mut sigma: BTreeMap<Name, Term> = BTreeMap::new();
    let mut work = vec![(t.clone(), u.clone())];
    while let Some((a, b)) = work.pop() {
        let a = resolve(&sigma, &a);
        let b = resolve(&sigma, &b);
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if occurs(x, other) {
                    return None;
                }
                // Keep the map idempotent by pushing the new binding into existing ranges.
                let single: Substitution = std::iter::once((x.clone(), other.clone())).collect();
                for v in sigma.values_mut() {
                    *v = single.apply(v);
                }
                sigma.insert(x.clone(), other.clone());
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                if f != g || fa.len() != ga.len() {
                    return None;
                }
                work.extend(fa.iter().cloned().zip(ga.iter().cloned()));
            }
        }
    }
    Some(sigma.into_iter().collect())
}

fn resolve(sigma: &BTreeMap<Name, Term>, t: &Term) -> Term {
    match t {
        Term::Var(x) => match sigma.get(x) {
            Some(bound) => resolve(sigma, bound),
            None => t.clone(),
        },
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| resolve(sigma, a)).collect()),
    }
}

fn occurs(x: &Name, t: &Term) -> bool {
    match t {
        Term::Var(y) => x == y,
        Term::App(_, args) => args.iter().any(|a| occurs(x, a)),
    }
}
