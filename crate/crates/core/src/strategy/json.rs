//! JSON export and import of the strategy syntax tree.
//!
//! Each node is an object tagged by `kind`; terms and contexts are embedded in
//! their text form.

use serde::{Deserialize, Serialize};

use super::{check_conjunction, Entry, Index, Kind, Strategy};
use crate::error::ParseError;
use crate::syntax::{parse_context, parse_term};
use crate::term::Name;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AstJson {
    Fail,
    Var { var: String },
    Ins { ctx: String },
    Guard { pattern: String, body: Box<AstJson> },
    Choice { left: Box<AstJson>, right: Box<AstJson> },
    Mu { var: String, body: Box<AstJson> },
    Conj { entries: Vec<EntryJson> },
    Most { body: Box<AstJson> },
    Ifthen { cond: Box<AstJson>, body: Box<AstJson> },
}

/// A conjunction entry; `idx` is `"eps"` or a decimal child index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub idx: String,
    pub body: AstJson,
}

impl From<&Strategy> for AstJson {
    fn from(s: &Strategy) -> AstJson {
        let b = |s: &Strategy| Box::new(AstJson::from(s));
        match s.kind() {
            Kind::Fail => AstJson::Fail,
            Kind::Var(x) => AstJson::Var { var: x.to_string() },
            Kind::Insert(c) => AstJson::Ins { ctx: c.to_string() },
            Kind::Guard(u, body) => AstJson::Guard {
                pattern: u.to_string(),
                body: b(body),
            },
            Kind::Choice(l, r) => AstJson::Choice { left: b(l), right: b(r) },
            Kind::Mu(x, body) => AstJson::Mu {
                var: x.to_string(),
                body: b(body),
            },
            Kind::Conj(es) => AstJson::Conj {
                entries: es
                    .iter()
                    .map(|e| EntryJson {
                        idx: e.idx.to_string(),
                        body: AstJson::from(&e.body),
                    })
                    .collect(),
            },
            Kind::Most(body) => AstJson::Most { body: b(body) },
            Kind::IfThen(c, body) => AstJson::Ifthen { cond: b(c), body: b(body) },
        }
    }
}

fn invalid(message: String) -> ParseError {
    ParseError {
        line: 1,
        column: 1,
        message,
    }
}

impl TryFrom<&AstJson> for Strategy {
    type Error = ParseError;

    fn try_from(a: &AstJson) -> Result<Strategy, ParseError> {
        let go = |a: &AstJson| Strategy::try_from(a);
        Ok(match a {
            AstJson::Fail => Strategy::fail(),
            AstJson::Var { var } => Strategy::var_named(Name::from(var.as_str())),
            AstJson::Ins { ctx } => Strategy::insert(parse_context(ctx)?),
            AstJson::Guard { pattern, body } => Strategy::guard(parse_term(pattern)?, go(body)?),
            AstJson::Choice { left, right } => Strategy::choice(go(left)?, go(right)?),
            AstJson::Mu { var, body } => Strategy::mu(var, go(body)?),
            AstJson::Conj { entries } => {
                let es = entries
                    .iter()
                    .map(|e| {
                        let idx = match e.idx.as_str() {
                            "eps" => Index::Eps,
                            n => Index::Nat(n.parse().map_err(|_| invalid(format!("bad index `{n}`")))?),
                        };
                        Ok(Entry::new(idx, go(&e.body)?))
                    })
                    .collect::<Result<Vec<_>, ParseError>>()?;
                check_conjunction(&es).map_err(invalid)?;
                Strategy::conj(es)
            }
            AstJson::Most { body } => Strategy::most(go(body)?),
            AstJson::Ifthen { cond, body } => Strategy::if_then(go(cond)?, go(body)?),
        })
    }
}

/// Serializes the syntax tree of `s` as compact JSON.
pub fn to_json(s: &Strategy) -> String {
    serde_json::to_string(&AstJson::from(s)).expect("the tree serializes")
}

/// Reads a syntax tree written by [`to_json`].
pub fn from_json(src: &str) -> Result<Strategy, ParseError> {
    let a: AstJson = serde_json::from_str(src).map_err(|e| ParseError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Strategy::try_from(&a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_strategy_lenient;

    #[test]
    fn round_trip() {
        let s = parse_strategy_lenient(
            "mu Z#0. (g(?x, b) ; if @1.fail then [@1.ins <f([])>, @eps.ins <g([], a)>]) + most(Z#0)",
        )
        .unwrap();
        let j = to_json(&s);
        assert!(j.starts_with(r#"{"kind":"mu","var":"Z#0","body":"#));
        assert_eq!(from_json(&j).unwrap(), s);
    }

    #[test]
    fn field_names() {
        let j = to_json(&parse_strategy_lenient("[@2.fail, @eps.ins <[]>]").unwrap());
        assert_eq!(
            j,
            r#"{"kind":"conj","entries":[{"idx":"2","body":{"kind":"fail"}},{"idx":"eps","body":{"kind":"ins","ctx":"[]"}}]}"#
        );
    }
}
