//! Compilation of a strategy against a concrete term into a position-based strategy.

use std::rc::Rc;

use crate::error::StrategyError;
use crate::pos::{canonicalize, PosCe};
use crate::strategy::{Index, Kind, MuBound, Strategy};
use crate::term::{matches, Name, Position, Term};

struct Binding {
    name: Name,
    body: Strategy,
    remaining: usize,
    next: Env,
}

type Env = Option<Rc<Binding>>;

/// Drops failing parts, prepends each child index to its part's positions and
/// concatenates child parts in order followed by root parts. All parts failing
/// gives `Fail`. The result is canonicalized.
pub fn theta(parts: Vec<(Index, PosCe)>) -> PosCe {
    let mut children = Vec::new();
    let mut roots = Vec::new();
    for (idx, part) in parts {
        match (idx, part) {
            (_, PosCe::Fail) => {}
            (Index::Nat(i), e) => children.extend(e.prefixed(i).entries().iter().cloned()),
            (Index::Eps, e) => roots.extend(e.entries().iter().cloned()),
        }
    }
    children.extend(roots);
    let e = PosCe::from_entries(children);
    canonicalize(&e).expect("parts at distinct children with trailing root entries are well-founded")
}

fn run(s: &Strategy, t: &Term, env: &Env, bound: MuBound) -> PosCe {
    match s.kind() {
        Kind::Fail => PosCe::Fail,
        Kind::Var(x) => {
            let mut cur = env;
            let b = loop {
                let b = cur.as_ref().expect("closedness is checked first");
                if &b.name == x {
                    break b;
                }
                cur = &b.next;
            };
            if b.remaining == 0 {
                return PosCe::Fail;
            }
            let inner = Some(Rc::new(Binding {
                name: x.clone(),
                body: b.body.clone(),
                remaining: b.remaining - 1,
                next: b.next.clone(),
            }));
            run(&b.body, t, &inner, bound)
        }
        Kind::Insert(c) => PosCe::single(Position::root(), c.clone()),
        Kind::Guard(u, body) => {
            if matches(u, t) {
                run(body, t, env, bound)
            } else {
                PosCe::Fail
            }
        }
        Kind::Choice(a, b) => match run(a, t, env, bound) {
            PosCe::Fail => run(b, t, env, bound),
            e => e,
        },
        Kind::Mu(x, body) => {
            let k = bound.iterations(t);
            if k == 0 {
                return PosCe::Fail;
            }
            let inner = Some(Rc::new(Binding {
                name: x.clone(),
                body: body.clone(),
                remaining: k - 1,
                next: env.clone(),
            }));
            run(body, t, &inner, bound)
        }
        Kind::IfThen(c, body) => {
            if run(c, t, env, bound).is_fail() {
                PosCe::Fail
            } else {
                run(body, t, env, bound)
            }
        }
        Kind::Conj(entries) => theta(
            entries
                .iter()
                .map(|e| {
                    let part = match e.idx {
                        Index::Eps => run(&e.body, t, env, bound),
                        Index::Nat(i) => match t.args().get(i.wrapping_sub(1)) {
                            Some(sub) => run(&e.body, sub, env, bound),
                            None => PosCe::Fail,
                        },
                    };
                    (e.idx, part)
                })
                .collect(),
        ),
        Kind::Most(body) => theta(
            t.args()
                .iter()
                .enumerate()
                .map(|(k, sub)| (Index::Nat(k + 1), run(body, sub, env, bound)))
                .collect(),
        ),
    }
}

/// `Ψ_t(S)`: the position-based strategy that performs exactly the insertions
/// `S` performs on `t`.
pub fn psi(s: &Strategy, t: &Term) -> Result<PosCe, StrategyError> {
    psi_with(s, t, MuBound::default())
}

/// [`psi`] with an explicit fixed-point bound.
pub fn psi_with(s: &Strategy, t: &Term, bound: MuBound) -> Result<PosCe, StrategyError> {
    if let Some(x) = s.free_vars().into_iter().next() {
        return Err(StrategyError::OpenStrategy(x));
    }
    Ok(run(s, t, &None, bound))
}
