//! Context-embedding strategies: syntax tree, semantics and static measures.
//!
//! A strategy navigates a term without changing it and inserts one-hole
//! contexts at the positions it reaches. Fixed points `mu X. S` iterate their
//! body a number of times bounded by the depth of the term they run on.

mod equiv;
mod eval;
mod json;
mod measure;
mod rename;
mod simplify;
mod unfold;
mod validate;

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::term::{Context, Name, Term};

pub use equiv::{equiv_upto, Equivalence, TermSource};
pub use eval::{eval, eval_outcome, eval_with, MuBound, Outcome};
pub use json::{from_json, to_json, AstJson, EntryJson};
pub use measure::{star_height, tree_depth, DepthMeasure};
pub use rename::{alpha_eq, alpha_rename, Namer};
pub use simplify::simplify;
pub use unfold::{iterate, pi_count, unfold, unfold_uniform, UnfoldMap};
pub use validate::{validate, Validation};

/// Index of a conjunction entry: a child number or the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Eps,
    Nat(usize),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Eps => f.write_str("eps"),
            Index::Nat(i) => write!(f, "{i}"),
        }
    }
}

/// One `@idx.body` entry of a conjunction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub idx: Index,
    pub body: Strategy,
}

impl Entry {
    pub fn new(idx: Index, body: Strategy) -> Self {
        Entry { idx, body }
    }

    pub fn nat(i: usize, body: Strategy) -> Self {
        Entry::new(Index::Nat(i), body)
    }
}

/// The constructors of the strategy language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Always fails.
    Fail,
    /// A fixed-point variable.
    Var(Name),
    /// `ins <τ>`: inserts `τ` at the current root.
    Insert(Context),
    /// `u ; S`: runs `S` when `u` matches the current term.
    Guard(Term, Strategy),
    /// `S + S′`: left-biased choice.
    Choice(Strategy, Strategy),
    /// `mu X. S`.
    Mu(Name, Strategy),
    /// `[@i₁.S₁, …]`: runs each entry at its child, ignoring entries that fail,
    /// and fails only when every entry fails.
    Conj(Vec<Entry>),
    /// `most(S)`: the conjunction of `@i.S` over all children of the current root.
    Most(Strategy),
    /// `if C then S`: runs `S` when `C` succeeds on the current term.
    IfThen(Strategy, Strategy),
}

struct Node {
    kind: Kind,
    hash: u64,
}

/// A shared, immutable strategy with a cached structural hash.
///
/// Cloning is cheap. Equality is structural (not up to renaming of bound
/// variables; see [`alpha_eq`] for that).
#[derive(Clone)]
pub struct Strategy(Arc<Node>);

impl Strategy {
    fn from_kind(kind: Kind) -> Strategy {
        let mut h = DefaultHasher::new();
        match &kind {
            Kind::Fail => 0u8.hash(&mut h),
            Kind::Var(x) => {
                1u8.hash(&mut h);
                x.hash(&mut h);
            }
            Kind::Insert(c) => {
                2u8.hash(&mut h);
                c.hash(&mut h);
            }
            Kind::Guard(u, s) => {
                3u8.hash(&mut h);
                u.hash(&mut h);
                s.hash(&mut h);
            }
            Kind::Choice(a, b) => {
                4u8.hash(&mut h);
                a.hash(&mut h);
                b.hash(&mut h);
            }
            Kind::Mu(x, s) => {
                5u8.hash(&mut h);
                x.hash(&mut h);
                s.hash(&mut h);
            }
            Kind::Conj(es) => {
                6u8.hash(&mut h);
                es.hash(&mut h);
            }
            Kind::Most(s) => {
                7u8.hash(&mut h);
                s.hash(&mut h);
            }
            Kind::IfThen(c, s) => {
                8u8.hash(&mut h);
                c.hash(&mut h);
                s.hash(&mut h);
            }
        }
        Strategy(Arc::new(Node {
            kind,
            hash: h.finish(),
        }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn fail() -> Strategy {
        Strategy::from_kind(Kind::Fail)
    }

    pub fn var(name: &str) -> Strategy {
        Strategy::from_kind(Kind::Var(Name::from(name)))
    }

    pub fn var_named(name: Name) -> Strategy {
        Strategy::from_kind(Kind::Var(name))
    }

    pub fn insert(ctx: Context) -> Strategy {
        Strategy::from_kind(Kind::Insert(ctx))
    }

    pub fn guard(pattern: Term, body: Strategy) -> Strategy {
        Strategy::from_kind(Kind::Guard(pattern, body))
    }

    pub fn choice(left: Strategy, right: Strategy) -> Strategy {
        Strategy::from_kind(Kind::Choice(left, right))
    }

    pub fn mu(var: &str, body: Strategy) -> Strategy {
        Strategy::from_kind(Kind::Mu(Name::from(var), body))
    }

    pub fn mu_named(var: Name, body: Strategy) -> Strategy {
        Strategy::from_kind(Kind::Mu(var, body))
    }

    /// A conjunction. Panics on an empty entry list, which has no meaning in the language.
    pub fn conj(entries: Vec<Entry>) -> Strategy {
        assert!(!entries.is_empty(), "a conjunction needs at least one entry");
        Strategy::from_kind(Kind::Conj(entries))
    }

    /// `@i.body` for a child index `i ≥ 1`.
    pub fn at(i: usize, body: Strategy) -> Strategy {
        assert!(i >= 1, "child indices are 1-based");
        Strategy::conj(vec![Entry::nat(i, body)])
    }

    /// `@p.body` for a whole path, as nested single-index jumps; `@eps.body` at the root.
    pub fn at_path(path: &[usize], body: Strategy) -> Strategy {
        if path.is_empty() {
            return Strategy::conj(vec![Entry::new(Index::Eps, body)]);
        }
        path.iter().rev().fold(body, |acc, &i| Strategy::at(i, acc))
    }

    /// `@p.body` for a non-empty path, or `body` itself for the empty path.
    pub fn at_path_nonroot(path: &[usize], body: Strategy) -> Strategy {
        path.iter().rev().fold(body, |acc, &i| Strategy::at(i, acc))
    }

    pub fn most(body: Strategy) -> Strategy {
        Strategy::from_kind(Kind::Most(body))
    }

    pub fn if_then(cond: Strategy, body: Strategy) -> Strategy {
        Strategy::from_kind(Kind::IfThen(cond, body))
    }

    /// `If A & B Then body`, i.e. `If A Then (If B Then body)`.
    pub fn if_both(a: Strategy, b: Strategy, body: Strategy) -> Strategy {
        Strategy::if_then(a, Strategy::if_then(b, body))
    }

    /// `mu X. (s + most(X))`: tries `s` top-down, descending into every child where it fails.
    pub fn top_down(s: Strategy, var: &str) -> Strategy {
        Strategy::mu(var, Strategy::choice(s, Strategy::most(Strategy::var(var))))
    }

    pub fn is_fail(&self) -> bool {
        matches!(self.kind(), Kind::Fail)
    }

    pub fn is_mu(&self) -> bool {
        matches!(self.kind(), Kind::Mu(..))
    }

    pub fn ptr_eq(&self, other: &Strategy) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Lower-case constructor name, as used by the JSON export.
    pub fn kind_name(&self) -> &'static str {
        match self.kind() {
            Kind::Fail => "fail",
            Kind::Var(_) => "var",
            Kind::Insert(_) => "ins",
            Kind::Guard(..) => "guard",
            Kind::Choice(..) => "choice",
            Kind::Mu(..) => "mu",
            Kind::Conj(_) => "conj",
            Kind::Most(_) => "most",
            Kind::IfThen(..) => "ifthen",
        }
    }

    /// Immediate sub-strategies in left-to-right order.
    pub fn children(&self) -> Vec<&Strategy> {
        match self.kind() {
            Kind::Fail | Kind::Var(_) | Kind::Insert(_) => vec![],
            Kind::Guard(_, s) | Kind::Mu(_, s) | Kind::Most(s) => vec![s],
            Kind::Choice(a, b) | Kind::IfThen(a, b) => vec![a, b],
            Kind::Conj(es) => es.iter().map(|e| &e.body).collect(),
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Strategy::size).sum::<usize>()
    }

    /// Free fixed-point variables.
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        fn walk(s: &Strategy, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match s.kind() {
                Kind::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                Kind::Mu(x, body) => {
                    bound.push(x.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                _ => s.children().into_iter().for_each(|c| walk(c, bound, out)),
            }
        }
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True when `x` occurs free.
    pub fn has_free(&self, x: &str) -> bool {
        match self.kind() {
            Kind::Var(y) => &**y == x,
            Kind::Mu(y, body) => &**y != x && body.has_free(x),
            _ => self.children().into_iter().any(|c| c.has_free(x)),
        }
    }

    /// Number of free occurrences of `x`.
    pub fn count_free(&self, x: &str) -> usize {
        match self.kind() {
            Kind::Var(y) => usize::from(&**y == x),
            Kind::Mu(y, body) => {
                if &**y == x {
                    0
                } else {
                    body.count_free(x)
                }
            }
            _ => self.children().into_iter().map(|c| c.count_free(x)).sum(),
        }
    }

    /// Replaces the free occurrences of `x` by `r`.
    ///
    /// `r` must not have free variables that a binder of `self` could capture;
    /// every caller in this crate substitutes closed strategies or strategies
    /// without binders.
    pub fn subst(&self, x: &str, r: &Strategy) -> Strategy {
        self.subst_opt(x, r).unwrap_or_else(|| self.clone())
    }

    fn subst_opt(&self, x: &str, r: &Strategy) -> Option<Strategy> {
        match self.kind() {
            Kind::Fail | Kind::Insert(_) => None,
            Kind::Var(y) => (&**y == x).then(|| r.clone()),
            Kind::Mu(y, body) => {
                if &**y == x {
                    None
                } else {
                    body.subst_opt(x, r)
                        .map(|b| Strategy::mu_named(y.clone(), b))
                }
            }
            Kind::Guard(u, s) => s.subst_opt(x, r).map(|s| Strategy::guard(u.clone(), s)),
            Kind::Most(s) => s.subst_opt(x, r).map(Strategy::most),
            Kind::Choice(a, b) => {
                let (na, nb) = (a.subst_opt(x, r), b.subst_opt(x, r));
                if na.is_none() && nb.is_none() {
                    return None;
                }
                Some(Strategy::choice(
                    na.unwrap_or_else(|| a.clone()),
                    nb.unwrap_or_else(|| b.clone()),
                ))
            }
            Kind::IfThen(a, b) => {
                let (na, nb) = (a.subst_opt(x, r), b.subst_opt(x, r));
                if na.is_none() && nb.is_none() {
                    return None;
                }
                Some(Strategy::if_then(
                    na.unwrap_or_else(|| a.clone()),
                    nb.unwrap_or_else(|| b.clone()),
                ))
            }
            Kind::Conj(es) => {
                let new: Vec<Option<Strategy>> = es.iter().map(|e| e.body.subst_opt(x, r)).collect();
                if new.iter().all(Option::is_none) {
                    return None;
                }
                Some(Strategy::conj(
                    es.iter()
                        .zip(new)
                        .map(|(e, n)| Entry::new(e.idx, n.unwrap_or_else(|| e.body.clone())))
                        .collect(),
                ))
            }
        }
    }

    /// Rebuilds the node with new children (same arity and order as [`Strategy::children`]).
    pub fn with_children(&self, kids: Vec<Strategy>) -> Strategy {
        let mut it = kids.into_iter();
        let mut next = || it.next().expect("child count matches");
        match self.kind() {
            Kind::Fail | Kind::Var(_) | Kind::Insert(_) => self.clone(),
            Kind::Guard(u, _) => Strategy::guard(u.clone(), next()),
            Kind::Mu(x, _) => Strategy::mu_named(x.clone(), next()),
            Kind::Most(_) => Strategy::most(next()),
            Kind::Choice(..) => {
                let a = next();
                Strategy::choice(a, next())
            }
            Kind::IfThen(..) => {
                let a = next();
                Strategy::if_then(a, next())
            }
            Kind::Conj(es) => Strategy::conj(es.iter().map(|e| Entry::new(e.idx, next())).collect()),
        }
    }
}

/// Checks the shape rules of a conjunction: child indices are distinct, and a
/// root entry comes last and, when other entries are present, is a plain
/// root insertion.
pub fn check_conjunction(entries: &[Entry]) -> Result<(), String> {
    if entries.is_empty() {
        return Err("a conjunction needs at least one entry".into());
    }
    let mut seen = BTreeSet::new();
    for (k, e) in entries.iter().enumerate() {
        match e.idx {
            Index::Nat(0) => return Err("child indices are 1-based".into()),
            Index::Nat(i) => {
                if !seen.insert(i) {
                    return Err(format!("index {i} occurs twice"));
                }
            }
            Index::Eps => {
                if k + 1 != entries.len() {
                    return Err("the root entry @eps must come last".into());
                }
                if entries.len() > 1 && !matches!(e.body.kind(), Kind::Insert(_)) {
                    return Err("a root entry next to other entries must be `ins <...>`".into());
                }
            }
        }
    }
    Ok(())
}

impl PartialEq for Strategy {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Strategy {}

impl Hash for Strategy {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Printing context: whether a bare choice is allowed and whether the
/// printed text extends to the end of the enclosing construct.
#[derive(Clone, Copy)]
struct Ctx {
    choice_ok: bool,
    trailing: bool,
}

const FULL: Ctx = Ctx {
    choice_ok: true,
    trailing: true,
};

fn write_strategy(s: &Strategy, ctx: Ctx, out: &mut String) {
    use std::fmt::Write;
    let paren = match s.kind() {
        Kind::Choice(..) => !ctx.choice_ok,
        Kind::Mu(..) | Kind::IfThen(..) => !ctx.trailing,
        _ => false,
    };
    let ctx = if paren { FULL } else { ctx };
    if paren {
        out.push('(');
    }
    match s.kind() {
        Kind::Fail => out.push_str("fail"),
        Kind::Var(x) => out.push_str(x),
        Kind::Insert(c) => {
            let _ = write!(out, "ins <{c}>");
        }
        Kind::Guard(u, body) => {
            let _ = write!(out, "{u} ; ");
            write_strategy(body, Ctx { choice_ok: false, ..ctx }, out);
        }
        Kind::Choice(a, b) => {
            write_strategy(a, Ctx { choice_ok: true, trailing: false }, out);
            out.push_str(" + ");
            write_strategy(b, Ctx { choice_ok: false, ..ctx }, out);
        }
        Kind::Mu(x, body) => {
            let _ = write!(out, "mu {x}. ");
            write_strategy(body, FULL, out);
        }
        Kind::Conj(es) if es.len() == 1 => {
            let _ = write!(out, "@{}.", es[0].idx);
            write_strategy(&es[0].body, Ctx { choice_ok: false, ..ctx }, out);
        }
        Kind::Conj(es) => {
            out.push('[');
            for (k, e) in es.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "@{}.", e.idx);
                write_strategy(&e.body, FULL, out);
            }
            out.push(']');
        }
        Kind::Most(body) => {
            out.push_str("most(");
            write_strategy(body, FULL, out);
            out.push(')');
        }
        Kind::IfThen(c, body) => {
            out.push_str("if ");
            write_strategy(c, FULL, out);
            out.push_str(" then ");
            write_strategy(body, FULL, out);
        }
    }
    if paren {
        out.push(')');
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_strategy(self, FULL, &mut out);
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_strategy;

    fn s(src: &str) -> Strategy {
        parse_strategy(src).unwrap()
    }

    #[test]
    fn printing_round_trips_through_the_parser() {
        for src in [
            "fail",
            "mu X. g(?x, ?y) ; ins <list([], i)> + @1.X",
            "(mu X. @1.X) + fail",
            "a ; (fail + fail)",
            "fail + (fail + fail)",
            "[@1.fail, @2.ins <f([])>, @eps.ins <[]>]",
            "most(mu Y. @2.Y + ins <[]>)",
            "if @1.fail then ins <[]> + fail",
            "(if fail then fail) + fail",
            "@1.@2.mu X. most(X)",
            "@1.(mu X. most(X)) + fail",
            "@eps.fail",
        ] {
            let parsed = s(src);
            assert_eq!(parsed.to_string(), src, "printing {src}");
            assert_eq!(s(&parsed.to_string()), parsed);
        }
    }

    #[test]
    fn substitution_respects_shadowing() {
        let body = s("@1.X + mu X. @2.X");
        let r = s("ins <[]>");
        assert_eq!(body.subst("X", &r), s("@1.ins <[]> + mu X. @2.X"));
        assert_eq!(body.count_free("X"), 1);
    }

    #[test]
    fn free_variables() {
        assert!(s("mu X. @1.X").is_closed());
        assert_eq!(
            s("mu X. @1.Y + @2.X").free_vars().into_iter().collect::<Vec<_>>(),
            vec![Name::from("Y")]
        );
    }

    #[test]
    fn structural_equality_uses_cached_hash() {
        let a = s("mu X. @1.X");
        let b = s("mu X. @1.X");
        assert!(!a.ptr_eq(&b));
        assert_eq!(a, b);
        assert_ne!(a, s("mu Y. @1.Y"));
    }
}
