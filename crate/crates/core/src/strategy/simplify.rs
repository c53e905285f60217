//! Semantics-preserving clean-up of engine output.

use super::{Entry, Kind, Strategy};

/// Removes binders whose variable does not occur and propagates failure:
///
/// * `mu Z. T` with `Z` not free in `T` becomes `T`;
/// * `fail + S` and `S + fail` become `S`;
/// * `u ; fail`, `most(fail)`, `if fail then S` and `if C then fail` become `fail`;
/// * `if ins <τ> then S` becomes `S`, since a root insertion always succeeds;
/// * failing conjunction entries are dropped, and an empty conjunction becomes `fail`.
pub fn simplify(s: &Strategy) -> Strategy {
    match s.kind() {
        Kind::Fail | Kind::Var(_) | Kind::Insert(_) => s.clone(),
        Kind::Mu(x, body) => {
            let b = simplify(body);
            if b.has_free(x) {
                Strategy::mu_named(x.clone(), b)
            } else {
                b
            }
        }
        Kind::Choice(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            if a.is_fail() {
                b
            } else if b.is_fail() {
                a
            } else {
                Strategy::choice(a, b)
            }
        }
        Kind::Guard(u, body) => {
            let b = simplify(body);
            if b.is_fail() {
                b
            } else {
                Strategy::guard(u.clone(), b)
            }
        }
        Kind::Most(body) => {
            let b = simplify(body);
            if b.is_fail() {
                b
            } else {
                Strategy::most(b)
            }
        }
        Kind::IfThen(c, body) => {
            let (c, b) = (simplify(c), simplify(body));
            if c.is_fail() || b.is_fail() {
                Strategy::fail()
            } else if matches!(c.kind(), Kind::Insert(_)) {
                b
            } else {
                Strategy::if_then(c, b)
            }
        }
        Kind::Conj(entries) => {
            let kept: Vec<Entry> = entries
                .iter()
                .map(|e| Entry::new(e.idx, simplify(&e.body)))
                .filter(|e| !e.body.is_fail())
                .collect();
            if kept.is_empty() {
                Strategy::fail()
            } else {
                Strategy::conj(kept)
            }
        }
    }
}
