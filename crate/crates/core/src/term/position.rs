//! Tree addresses.

use std::cmp::Ordering;
use std::fmt;

use crate::error::TermError;

/// How two positions relate in the prefix order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PositionOrder {
    /// The left position is a strict ancestor (proper prefix) of the right one.
    Less,
    /// The left position is a strict descendant of the right one.
    Greater,
    /// Both positions are the same.
    Equal,
    /// Neither position is a prefix of the other.
    Parallel,
}

/// A path of 1-based child indices from the root; the empty path is the root `eps`.
///
/// The `Ord` instance is the canonical insertion order used throughout the
/// crate: a descendant sorts before its ancestors and parallel positions sort
/// lexicographically, which is exactly a post-order walk of the tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Position(Vec<usize>);

impl Position {
    /// The root position.
    pub fn root() -> Self {
        Position(Vec::new())
    }

    /// Builds a position from child indices, rejecting zero.
    pub fn new(indices: Vec<usize>) -> Result<Self, TermError> {
        if indices.contains(&0) {
            return Err(TermError::ZeroIndex);
        }
        Ok(Position(indices))
    }

    /// The position of the `i`-th child of the root.
    pub fn child(i: usize) -> Self {
        assert!(i >= 1, "child indices are 1-based");
        Position(vec![i])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `i·self`.
    pub fn prefixed(&self, i: usize) -> Position {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        Position(v)
    }

    /// `self·other`.
    pub fn concat(&self, other: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }

    /// `self·i`.
    pub fn push(&self, i: usize) -> Position {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    /// First index and the remaining suffix, or `None` at the root.
    pub fn split_first(&self) -> Option<(usize, Position)> {
        self.0
            .split_first()
            .map(|(h, rest)| (*h, Position(rest.to_vec())))
    }

    /// True when `self` is a proper prefix of `other`.
    pub fn is_strict_ancestor_of(&self, other: &Position) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }

    /// Relates two positions in the prefix order.
    pub fn compare(&self, other: &Position) -> PositionOrder {
        if self == other {
            PositionOrder::Equal
        } else if self.is_strict_ancestor_of(other) {
            PositionOrder::Less
        } else if other.is_strict_ancestor_of(self) {
            PositionOrder::Greater
        } else {
            PositionOrder::Parallel
        }
    }
}

impl Ord for Position {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        // One is a prefix of the other: the longer (deeper) one comes first.
        other.0.len().cmp(&self.0.len())
    }
}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("eps");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}
