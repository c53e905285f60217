//! Pre-strategies: strategies with pending unification tuples.

use std::fmt;
use std::rc::Rc;

use crate::strategy::{Entry, Index, Strategy};
use crate::term::{Name, Term};

/// A remembered pair of the fixed-point rules together with the variable
/// standing for its unification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemEntry {
    pub left: Strategy,
    pub right: Strategy,
    pub var: Name,
}

/// The memory of a tuple: an immutable, shared list of entries.
#[derive(Clone, Debug, Default)]
pub struct Memory(Rc<Vec<MemEntry>>);

impl Memory {
    pub fn new() -> Self {
        Memory::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MemEntry> {
        self.0.iter()
    }

    /// The variable stored for the pair `(left, right)`, if any.
    pub fn lookup(&self, left: &Strategy, right: &Strategy) -> Option<&Name> {
        self.0
            .iter()
            .find(|m| &m.left == left && &m.right == right)
            .map(|m| &m.var)
    }

    /// A new memory with one more entry.
    pub fn with(&self, left: Strategy, right: Strategy, var: Name) -> Memory {
        let mut v = (*self.0).clone();
        v.push(MemEntry { left, right, var });
        Memory(Rc::new(v))
    }
}

/// `⟨S, R, M⟩`, together with the guard pattern known to match the term at
/// the tuple's position, when there is one.
#[derive(Clone, Debug)]
pub struct Tuple {
    pub left: Strategy,
    pub right: Strategy,
    pub mem: Memory,
    pub pattern: Option<Term>,
}

impl Tuple {
    pub fn new(left: Strategy, right: Strategy) -> Tuple {
        Tuple {
            left,
            right,
            mem: Memory::new(),
            pattern: None,
        }
    }
}

/// A strategy whose nodes may be pending tuples.
#[derive(Clone, Debug)]
pub enum PreCe {
    Done(Strategy),
    Tuple(Box<Tuple>),
    Guard(Term, Box<PreCe>),
    Choice(Box<PreCe>, Box<PreCe>),
    Mu(Name, Box<PreCe>),
    Conj(Vec<(Index, PreCe)>),
    Most(Box<PreCe>),
    IfThen(Strategy, Box<PreCe>),
}

impl PreCe {
    pub fn tuple(t: Tuple) -> PreCe {
        PreCe::Tuple(Box::new(t))
    }

    /// Direct sub-pre-strategies, left to right.
    pub fn children(&self) -> Vec<&PreCe> {
        match self {
            PreCe::Done(_) | PreCe::Tuple(_) => vec![],
            PreCe::Guard(_, p) | PreCe::Mu(_, p) | PreCe::Most(p) | PreCe::IfThen(_, p) => vec![p],
            PreCe::Choice(a, b) => vec![a, b],
            PreCe::Conj(es) => es.iter().map(|(_, p)| p).collect(),
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut PreCe> {
        match self {
            PreCe::Done(_) | PreCe::Tuple(_) => vec![],
            PreCe::Guard(_, p) | PreCe::Mu(_, p) | PreCe::Most(p) | PreCe::IfThen(_, p) => vec![p],
            PreCe::Choice(a, b) => vec![a, b],
            PreCe::Conj(es) => es.iter_mut().map(|(_, p)| p).collect(),
        }
    }

    /// Number of pending tuples.
    pub fn tuple_count(&self) -> usize {
        match self {
            PreCe::Tuple(_) => 1,
            _ => self.children().into_iter().map(PreCe::tuple_count).sum(),
        }
    }

    /// The tuples in left-to-right order with their paths.
    pub fn tuples(&self) -> Vec<(Vec<usize>, &Tuple)> {
        fn go<'a>(p: &'a PreCe, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Tuple)>) {
            if let PreCe::Tuple(t) = p {
                out.push((path.clone(), t));
                return;
            }
            for (k, c) in p.children().into_iter().enumerate() {
                path.push(k);
                go(c, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn at_path_mut(&mut self, path: &[usize]) -> &mut PreCe {
        let mut cur = self;
        for &k in path {
            cur = cur.children_mut().into_iter().nth(k).expect("valid path");
        }
        cur
    }

    /// The strategy, once no tuple is left.
    pub fn into_strategy(self) -> Option<Strategy> {
        Some(match self {
            PreCe::Done(s) => s,
            PreCe::Tuple(_) => return None,
            PreCe::Guard(u, p) => Strategy::guard(u, p.into_strategy()?),
            PreCe::Choice(a, b) => Strategy::choice(a.into_strategy()?, b.into_strategy()?),
            PreCe::Mu(x, p) => Strategy::mu_named(x, p.into_strategy()?),
            PreCe::Conj(es) => Strategy::conj(
                es.into_iter()
                    .map(|(i, p)| Some(Entry::new(i, p.into_strategy()?)))
                    .collect::<Option<Vec<_>>>()?,
            ),
            PreCe::Most(p) => Strategy::most(p.into_strategy()?),
            PreCe::IfThen(c, p) => Strategy::if_then(c, p.into_strategy()?),
        })
    }
}

impl fmt::Display for PreCe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreCe::Done(s) => write!(f, "{s}"),
            PreCe::Tuple(t) => write!(f, "<<{} | {} | {} remembered>>", t.left, t.right, t.mem.len()),
            PreCe::Guard(u, p) => write!(f, "{u} ; ({p})"),
            PreCe::Choice(a, b) => write!(f, "({a}) + ({b})"),
            PreCe::Mu(x, p) => write!(f, "mu {x}. ({p})"),
            PreCe::Conj(es) => {
                f.write_str("[")?;
                for (k, (i, p)) in es.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "@{i}.({p})")?;
                }
                f.write_str("]")
            }
            PreCe::Most(p) => write!(f, "most({p})"),
            PreCe::IfThen(c, p) => write!(f, "if ({c}) then ({p})"),
        }
    }
}
