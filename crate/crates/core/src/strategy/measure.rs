//! Star height, tree depth and their lexicographic pair.

use serde::Serialize;

use super::{Kind, Strategy};

/// `(star height, tree depth)`, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DepthMeasure {
    pub star_height: usize,
    pub tree_depth: usize,
}

impl DepthMeasure {
    pub fn of(s: &Strategy) -> DepthMeasure {
        DepthMeasure {
            star_height: star_height(s),
            tree_depth: tree_depth(s),
        }
    }

    pub fn as_pair(&self) -> [usize; 2] {
        [self.star_height, self.tree_depth]
    }
}

/// Nesting depth of fixed-point binders.
pub fn star_height(s: &Strategy) -> usize {
    match s.kind() {
        Kind::Mu(_, body) => 1 + star_height(body),
        _ => s.children().into_iter().map(star_height).max().unwrap_or(0),
    }
}

/// Depth of the syntax tree with fixed-point binders counted as transparent.
pub fn tree_depth(s: &Strategy) -> usize {
    match s.kind() {
        Kind::Fail | Kind::Var(_) => 0,
        Kind::Insert(_) => 1,
        Kind::Mu(_, body) => tree_depth(body),
        _ => 1 + s.children().into_iter().map(tree_depth).max().unwrap_or(0),
    }
}
