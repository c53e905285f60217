//! Executable semantics of strategies.

use std::rc::Rc;

use super::{Index, Kind, Strategy};
use crate::error::StrategyError;
use crate::term::{matches, Name, Term};

/// The result of running a strategy: a term, or `None` for failure.
pub type Outcome = Option<Term>;

/// How many times `mu X. T` iterates its body on a term `t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuBound {
    /// `depth(t) + 1` iterations. This is the bound under which the fixed
    /// point is stable: one more iteration never changes the result.
    #[default]
    DepthPlusOne,
    /// `depth(t)` iterations, so that on a constant every fixed point fails.
    Depth,
}

impl MuBound {
    pub fn iterations(self, t: &Term) -> usize {
        match self {
            MuBound::DepthPlusOne => t.depth() + 1,
            MuBound::Depth => t.depth(),
        }
    }
}

/// A binding of a fixed-point variable to the iterate `mu^remaining X. body`.
/// `next` is the environment of the binder, which is also the rest of the chain.
struct Binding {
    name: Name,
    body: Strategy,
    remaining: usize,
    next: Env,
}

type Env = Option<Rc<Binding>>;

fn lookup<'a>(mut env: &'a Env, x: &Name) -> Option<&'a Binding> {
    while let Some(b) = env {
        if &b.name == x {
            return Some(b);
        }
        env = &b.next;
    }
    None
}

fn bind(name: Name, body: Strategy, remaining: usize, closure: Env) -> Env {
    Some(Rc::new(Binding {
        name,
        body,
        remaining,
        next: closure,
    }))
}

fn run(s: &Strategy, t: &Term, env: &Env, bound: MuBound) -> Outcome {
    match s.kind() {
        Kind::Fail => None,
        Kind::Var(x) => {
            let b = lookup(env, x).expect("closedness is checked before evaluation");
            if b.remaining == 0 {
                return None;
            }
            let inner = bind(x.clone(), b.body.clone(), b.remaining - 1, b.next.clone());
            run(&b.body, t, &inner, bound)
        }
        Kind::Insert(c) => Some(c.fill(t.clone())),
        Kind::Guard(u, body) => {
            if matches(u, t) {
                run(body, t, env, bound)
            } else {
                None
            }
        }
        Kind::Choice(a, b) => run(a, t, env, bound).or_else(|| run(b, t, env, bound)),
        Kind::Mu(x, body) => {
            let k = bound.iterations(t);
            if k == 0 {
                return None;
            }
            let inner = bind(x.clone(), body.clone(), k - 1, env.clone());
            run(body, t, &inner, bound)
        }
        Kind::IfThen(c, body) => {
            run(c, t, env, bound)?;
            run(body, t, env, bound)
        }
        Kind::Conj(entries) => {
            let mut cur = t.clone();
            let mut any = false;
            for e in entries {
                match e.idx {
                    Index::Nat(i) => {
                        if let Some(next) = at_child(&cur, i, |sub| run(&e.body, sub, env, bound)) {
                            cur = next;
                            any = true;
                        }
                    }
                    Index::Eps => {
                        if let Some(next) = run(&e.body, &cur, env, bound) {
                            cur = next;
                            any = true;
                        }
                    }
                }
            }
            any.then_some(cur)
        }
        Kind::Most(body) => {
            let mut cur = t.clone();
            let mut any = false;
            for i in 1..=t.arity() {
                if let Some(next) = at_child(&cur, i, |sub| run(body, sub, env, bound)) {
                    cur = next;
                    any = true;
                }
            }
            any.then_some(cur)
        }
    }
}

/// Runs `f` on child `i` of `t` and plugs the result back in.
fn at_child(t: &Term, i: usize, f: impl FnOnce(&Term) -> Outcome) -> Outcome {
    t.update_at(&[i], f)
}

/// Evaluates a closed strategy on a term.
pub fn eval(s: &Strategy, t: &Term) -> Result<Outcome, StrategyError> {
    eval_with(s, t, MuBound::default())
}

/// Evaluates a closed strategy on a term with an explicit fixed-point bound.
pub fn eval_with(s: &Strategy, t: &Term, bound: MuBound) -> Result<Outcome, StrategyError> {
    if let Some(x) = s.free_vars().into_iter().next() {
        return Err(StrategyError::OpenStrategy(x));
    }
    Ok(run(s, t, &None, bound))
}

/// Evaluates on an outcome: failure stays failure.
pub fn eval_outcome(s: &Strategy, t: &Outcome) -> Result<Outcome, StrategyError> {
    match t {
        None => {
            if let Some(x) = s.free_vars().into_iter().next() {
                return Err(StrategyError::OpenStrategy(x));
            }
            Ok(None)
        }
        Some(t) => eval(s, t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_strategy, parse_term};

    fn ev(s: &str, t: &str) -> Option<String> {
        eval(&parse_strategy(s).unwrap(), &parse_term(t).unwrap())
            .unwrap()
            .map(|t| t.to_string())
    }

    #[test]
    fn root_insertion() {
        assert_eq!(
            ev("ins <list([], i)>", "var(x, reg(omega, one))").as_deref(),
            Some("list(var(x, reg(omega, one)), i)")
        );
    }

    #[test]
    fn conjunction_inserts_at_both_children() {
        assert_eq!(
            ev("[@1.ins <list([], i)>, @2.ins <list([], j)>]", "d(u, x)").as_deref(),
            Some("d(list(u, i), list(x, j))")
        );
        assert_eq!(ev("[@3.ins <f([])>]", "f(a)"), None);
        assert_eq!(ev("[@1.fail, @2.ins <f([])>]", "g(a, b)").as_deref(), Some("g(a, f(b))"));
    }

    #[test]
    fn fixed_point_walks_the_leftmost_spine() {
        let s = "mu X. (g(?x, ?y) ; ins <list([], i)>) + @1.X";
        assert_eq!(ev(s, "g(a, b)").as_deref(), Some("list(g(a, b), i)"));
        assert_eq!(ev(s, "f(g(a, b))").as_deref(), Some("f(list(g(a, b), i))"));
        assert_eq!(ev(s, "f(f(a))"), None);
    }

    #[test]
    fn fixed_point_reaches_constant_leaves() {
        let s = "mu X. (a ; ins <f([])>) + @1.X";
        assert_eq!(ev(s, "a").as_deref(), Some("f(a)"));
        assert_eq!(ev(s, "f(f(a))").as_deref(), Some("f(f(f(a)))"));
        let t = parse_term("a").unwrap();
        let lit = eval_with(&parse_strategy(s).unwrap(), &t, MuBound::Depth).unwrap();
        assert_eq!(lit, None);
    }

    #[test]
    fn most_fails_on_constants() {
        assert_eq!(ev("most(ins <f([])>)", "a"), None);
        assert_eq!(ev("most(ins <f([])>)", "g(a, b)").as_deref(), Some("g(f(a), f(b))"));
    }

    #[test]
    fn if_then_keeps_the_original_term() {
        assert_eq!(ev("if ins <f([])> then ins <h([])>", "a").as_deref(), Some("h(a)"));
        assert_eq!(ev("if fail then ins <h([])>", "a"), None);
    }

    #[test]
    fn open_strategies_are_rejected() {
        let e = eval(&parse_strategy("@1.X").unwrap(), &parse_term("f(a)").unwrap());
        assert!(matches!(e, Err(StrategyError::OpenStrategy(_))));
    }
}
