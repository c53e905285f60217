//! Context-embedding strategies.
//!
//! A context-embedding strategy walks a first-order term and inserts one-hole
//! contexts at the positions it reaches. This crate provides:
//!
//! * [`term`]: terms, positions, contexts, matching and unification of terms;
//! * [`pos`]: position-based strategies, which are plain lists of insertions;
//! * [`strategy`]: the strategy language with fixed points, its semantics and measures;
//! * [`psi`]: compilation of a strategy against a term into a position-based strategy;
//! * [`unify`]: the rewriting engine computing the unification and combination of strategies;
//! * [`oracle`]: generators and differential test suites for the laws relating all of the above;
//! * [`syntax`]: the text formats.

pub mod error;
pub mod oracle;
pub mod pos;
pub mod psi;
pub mod strategy;
pub mod syntax;
pub mod term;
pub mod unify;

pub use error::{ParseError, PosError, SignatureError, StrategyError, TermError, UnifyError};
pub use pos::{apply_pos_ce, canonicalize, combine_pos, eq_pos, is_well_founded, unify_pos, PosCe};
pub use psi::{psi, psi_with, theta};
pub use strategy::{eval, eval_with, Entry, Index, Kind, MuBound, Outcome, Strategy};
pub use syntax::{parse_context, parse_pos_ce, parse_position, parse_strategy, parse_term};
pub use term::{Context, MergeMode, Name, Position, Signature, Term};
pub use unify::{combine, unify, EngineOptions, Session};
