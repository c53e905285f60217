//! One-hole contexts as zippers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Name, Position, Term};

/// One step on the path from the root of a context down to its hole.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    pub symbol: Name,
    /// Siblings to the left of the hole-bearing child.
    pub left: Vec<Term>,
    /// Siblings to the right of the hole-bearing child.
    pub right: Vec<Term>,
}

/// A term with exactly one hole `[]`, stored as the list of frames from the
/// root down to the hole. The bare hole is the empty list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    frames: Vec<Frame>,
}

/// How two contexts inserted at the same position are merged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MergeMode {
    /// `τ·τ′ = τ[τ′]`: the right context is grafted into the hole of the left one.
    #[default]
    Nest,
    /// `τ·τ′ = τ`: an idempotent merge used to exercise the idempotence laws.
    LeftProject,
}

impl FromStr for MergeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nest" => Ok(MergeMode::Nest),
            "leftproject" => Ok(MergeMode::LeftProject),
            other => Err(format!("unknown merge mode `{other}`")),
        }
    }
}

impl fmt::Display for MergeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MergeMode::Nest => "nest",
            MergeMode::LeftProject => "leftproject",
        })
    }
}

impl Context {
    /// The bare hole `[]`.
    pub fn hole() -> Self {
        Context { frames: Vec::new() }
    }

    pub fn from_frames(frames: Vec<Frame>) -> Self {
        Context { frames }
    }

    /// `symbol(left.., [], right..)`.
    pub fn wrap(symbol: &str, left: Vec<Term>, right: Vec<Term>) -> Self {
        Context {
            frames: vec![Frame {
                symbol: Name::from(symbol),
                left,
                right,
            }],
        }
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn is_hole(&self) -> bool {
        self.frames.is_empty()
    }

    /// Position of the hole.
    pub fn hole_position(&self) -> Position {
        Position::new(self.frames.iter().map(|f| f.left.len() + 1).collect())
            .expect("hole indices are at least 1")
    }

    /// Depth of the context viewed as a term whose hole is a leaf.
    pub fn depth(&self) -> usize {
        let mut depth = 0;
        for (k, frame) in self.frames.iter().enumerate() {
            let sibling = frame
                .left
                .iter()
                .chain(frame.right.iter())
                .map(|t| k + 1 + t.depth())
                .max()
                .unwrap_or(0);
            depth = depth.max(sibling).max(k + 1);
        }
        depth
    }

    /// `τ[t]`: the term obtained by replacing the hole with `t`.
    pub fn fill(&self, t: Term) -> Term {
        self.frames.iter().rev().fold(t, |inner, frame| {
            let mut args = Vec::with_capacity(frame.left.len() + 1 + frame.right.len());
            args.extend(frame.left.iter().cloned());
            args.push(inner);
            args.extend(frame.right.iter().cloned());
            Term::App(frame.symbol.clone(), args)
        })
    }

    /// `τ·τ′` under the given merge mode.
    pub fn merge(&self, other: &Context, mode: MergeMode) -> Context {
        match mode {
            MergeMode::Nest => {
                let mut frames = self.frames.clone();
                frames.extend(other.frames.iter().cloned());
                Context { frames }
            }
            MergeMode::LeftProject => self.clone(),
        }
    }

    /// Symbols used by the context with their arities.
    pub fn symbols(&self) -> Vec<(Name, usize)> {
        let mut out = Vec::new();
        for frame in &self.frames {
            out.push((frame.symbol.clone(), frame.left.len() + 1 + frame.right.len()));
            for t in frame.left.iter().chain(frame.right.iter()) {
                collect_symbols(t, &mut out);
            }
        }
        out
    }
}

pub(crate) fn collect_symbols(t: &Term, out: &mut Vec<(Name, usize)>) {
    if let Term::App(f, args) = t {
        out.push((f.clone(), args.len()));
        args.iter().for_each(|a| collect_symbols(a, out));
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::from("[]");
        for frame in self.frames.iter().rev() {
            let mut parts: Vec<String> = frame.left.iter().map(Term::to_string).collect();
            parts.push(s);
            parts.extend(frame.right.iter().map(Term::to_string));
            s = format!("{}({})", frame.symbol, parts.join(", "));
        }
        f.write_str(&s)
    }
}
