//! First-order terms, positions, one-hole contexts and substitutions.

mod context;
mod position;
mod signature;
mod subst;

use std::fmt;
use std::sync::Arc;

pub use context::{Context, Frame, MergeMode};
pub use position::{Position, PositionOrder};
pub use signature::Signature;
pub use subst::{apply_subst, match_term, matches, mgu, Substitution};

use crate::error::TermError;

/// Interned-by-sharing identifier used for symbols and variables.
pub type Name = Arc<str>;

/// A first-order term: a variable or a function symbol applied to its arguments.
///
/// The arity of a symbol is the length of its argument list; consistency of
/// arities across a term is checked against a [`Signature`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    App(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn app(symbol: &str, args: Vec<Term>) -> Term {
        Term::App(Arc::from(symbol), args)
    }

    pub fn constant(symbol: &str) -> Term {
        Term::App(Arc::from(symbol), Vec::new())
    }

    /// Number of children; zero for variables and constants.
    pub fn arity(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.len(),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// The root symbol of an application.
    pub fn symbol(&self) -> Option<&Name> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    /// Depth: 0 for variables and constants, otherwise one more than the deepest child.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    /// All positions of the term in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        fn walk(t: &Term, here: &Position, out: &mut Vec<Position>) {
            out.push(here.clone());
            for (k, a) in t.args().iter().enumerate() {
                walk(a, &here.push(k + 1), out);
            }
        }
        walk(self, &Position::root(), &mut out);
        out
    }

    pub fn has_position(&self, p: &Position) -> bool {
        self.get(p).is_some()
    }

    /// The subterm at `p`, if `p` is a position of the term.
    pub fn get(&self, p: &Position) -> Option<&Term> {
        let mut t = self;
        for &i in p.indices() {
            t = t.args().get(i - 1)?;
        }
        Some(t)
    }

    /// `t|p`.
    pub fn subterm_at(&self, p: &Position) -> Result<&Term, TermError> {
        self.get(p)
            .ok_or_else(|| TermError::PositionOutOfTerm(p.clone()))
    }

    /// `t[s]_p`.
    pub fn replace_at(&self, p: &Position, s: Term) -> Result<Term, TermError> {
        fn go(t: &Term, idx: &[usize], s: Term) -> Option<Term> {
            match idx.split_first() {
                None => Some(s),
                Some((&i, rest)) => match t {
                    Term::App(f, args) if i <= args.len() => {
                        let mut args = args.clone();
                        args[i - 1] = go(&args[i - 1], rest, s)?;
                        Some(Term::App(f.clone(), args))
                    }
                    _ => None,
                },
            }
        }
        go(self, p.indices(), s).ok_or_else(|| TermError::PositionOutOfTerm(p.clone()))
    }

    /// Applies `f` to the subterm at `p` and returns the rebuilt term, or `None`
    /// when `p` is not a position or `f` fails.
    pub fn update_at<F>(&self, p: &[usize], f: F) -> Option<Term>
    where
        F: FnOnce(&Term) -> Option<Term>,
    {
        match p.split_first() {
            None => f(self),
            Some((&i, rest)) => match self {
                Term::App(sym, args) if i >= 1 && i <= args.len() => {
                    let new_child = args[i - 1].update_at(rest, f)?;
                    let mut args = args.clone();
                    args[i - 1] = new_child;
                    Some(Term::App(sym.clone(), args))
                }
                _ => None,
            },
        }
    }

    /// Variables of the term in first-occurrence order, without duplicates.
    pub fn vars(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        fn walk(t: &Term, out: &mut Vec<Name>) {
            match t {
                Term::Var(x) => {
                    if !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                Term::App(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "?{x}"),
            Term::App(s, args) if args.is_empty() => write!(f, "{s}"),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}
