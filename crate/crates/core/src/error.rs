//! Error types.

use thiserror::Error;

use crate::term::{Name, Position};

/// Failures of term-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("position {0} is not a position of the term")]
    PositionOutOfTerm(Position),
    #[error("position indices are 1-based; 0 is not allowed")]
    ZeroIndex,
}

/// Inconsistent or malformed symbol declarations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{symbol}` has arity {declared} but is used with {found} arguments")]
    ArityMismatch {
        symbol: String,
        declared: usize,
        found: usize,
    },
    #[error("symbol `{symbol}` is not declared in the signature")]
    Undeclared { symbol: String },
    #[error("line {line}: expected `name/arity`, found `{text}`")]
    BadLine { line: usize, text: String },
}

/// A syntax error with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A position-based strategy whose entries are not in a well-founded order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosError {
    #[error("entries {first} and {second} use the same position {position}")]
    DuplicatePosition {
        first: usize,
        second: usize,
        position: Position,
    },
    #[error("entry {first} at {ancestor} is an ancestor of the later entry {second} at {descendant}")]
    AncestorFirst {
        first: usize,
        second: usize,
        ancestor: Position,
        descendant: Position,
    },
}

/// Failures of strategy-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("fixed-point variable {0} is free")]
    OpenStrategy(Name),
    #[error("the unfolding map has no count for {0}")]
    IncompleteMap(Name),
    #[error("fixed-point variable {var} occurs {occurrences} times, expected exactly once")]
    VariableNotLinear { var: Name, occurrences: usize },
    #[error("position-based strategy is not well-founded: {0}")]
    NotWellFounded(#[from] PosError),
    #[error("conjunction at {path} is not well-founded: {reason}")]
    IllFormedConjunction { path: String, reason: String },
}

/// Failures of the unification engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("{side} input is not accepted: {reasons}")]
    ValidationFailure { side: &'static str, reasons: String },
    #[error("rule {rule} at {path} does not decrease the measure: {before} -> {after}")]
    MeasureViolation {
        rule: String,
        path: String,
        before: String,
        after: String,
    },
}
