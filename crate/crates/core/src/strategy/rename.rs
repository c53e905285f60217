//! Renaming of bound fixed-point variables.

use super::{Entry, Kind, Strategy};
use crate::term::Name;

/// A source of fresh variable names. Each call to [`Namer::fresh`] returns a
/// name not returned before by the same namer.
#[derive(Clone, Debug, Default)]
pub struct Namer {
    next: usize,
}

impl Namer {
    pub fn new() -> Self {
        Namer::default()
    }

    /// `base_k` for the next counter value `k`, dropping any `_digits` suffix of `base`.
    pub fn fresh(&mut self, base: &str) -> Name {
        let stem = match base.rsplit_once('_') {
            Some((stem, digits)) if !stem.is_empty() && !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => stem,
            _ => base,
        };
        let name = format!("{stem}_{}", self.next);
        self.next += 1;
        Name::from(name)
    }
}

/// Gives every binder of `s` a fresh name from `namer`. Free variables are kept.
pub fn alpha_rename(s: &Strategy, namer: &mut Namer) -> Strategy {
    fn go(s: &Strategy, env: &mut Vec<(Name, Name)>, namer: &mut Namer) -> Strategy {
        match s.kind() {
            Kind::Var(x) => match env.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Strategy::var_named(new.clone()),
                None => s.clone(),
            },
            Kind::Mu(x, body) => {
                let new = namer.fresh(x);
                env.push((x.clone(), new.clone()));
                let b = go(body, env, namer);
                env.pop();
                Strategy::mu_named(new, b)
            }
            Kind::Fail | Kind::Insert(_) => s.clone(),
            Kind::Conj(es) => Strategy::conj(
                es.iter()
                    .map(|e| Entry::new(e.idx, go(&e.body, env, namer)))
                    .collect(),
            ),
            _ => {
                let kids = s.children().into_iter().map(|c| go(c, env, namer)).collect();
                s.with_children(kids)
            }
        }
    }
    go(s, &mut Vec::new(), namer)
}

/// Structural equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Strategy, b: &Strategy) -> bool {
    fn go(a: &Strategy, b: &Strategy, env: &mut Vec<(Name, Name)>) -> bool {
        if env.is_empty() && a == b {
            return true;
        }
        match (a.kind(), b.kind()) {
            (Kind::Fail, Kind::Fail) => true,
            (Kind::Var(x), Kind::Var(y)) => {
                let bx = env.iter().rev().position(|(l, _)| l == x);
                let by = env.iter().rev().position(|(_, r)| r == y);
                match (bx, by) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Kind::Insert(c), Kind::Insert(d)) => c == d,
            (Kind::Guard(u, s), Kind::Guard(v, r)) => u == v && go(s, r, env),
            (Kind::Most(s), Kind::Most(r)) => go(s, r, env),
            (Kind::Choice(a1, a2), Kind::Choice(b1, b2)) | (Kind::IfThen(a1, a2), Kind::IfThen(b1, b2)) => {
                go(a1, b1, env) && go(a2, b2, env)
            }
            (Kind::Mu(x, s), Kind::Mu(y, r)) => {
                env.push((x.clone(), y.clone()));
                let ok = go(s, r, env);
                env.pop();
                ok
            }
            (Kind::Conj(es), Kind::Conj(fs)) => {
                es.len() == fs.len()
                    && es
                        .iter()
                        .zip(fs)
                        .all(|(e, f)| e.idx == f.idx && go(&e.body, &f.body, env))
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_strategy;

    fn s(src: &str) -> Strategy {
        parse_strategy(src).unwrap()
    }

    #[test]
    fn fresh_names_strip_numeric_suffixes() {
        let mut n = Namer::new();
        assert_eq!(&*n.fresh("X"), "X_0");
        assert_eq!(&*n.fresh("X_0"), "X_1");
        assert_eq!(&*n.fresh("Y_a"), "Y_a_2");
    }

    #[test]
    fn renaming_gives_disjoint_binders() {
        let src = s("mu X. @1.X + mu Y. @2.Y");
        let mut n = Namer::new();
        let a = alpha_rename(&src, &mut n);
        let b = alpha_rename(&src, &mut n);
        assert_eq!(a.to_string(), "mu X_0. @1.X_0 + mu Y_1. @2.Y_1");
        assert!(alpha_eq(&a, &b));
        assert!(alpha_eq(&a, &src));
        assert_ne!(a, b);
    }

    #[test]
    fn alpha_equality_respects_binding_structure() {
        assert!(alpha_eq(&s("mu X. mu Y. @1.X + @2.Y"), &s("mu A. mu B. @1.A + @2.B")));
        assert!(!alpha_eq(&s("mu X. mu Y. @1.X + @2.Y"), &s("mu A. mu B. @1.B + @2.A")));
        assert!(!alpha_eq(&s("@1.X"), &s("@1.Y")));
    }
}
