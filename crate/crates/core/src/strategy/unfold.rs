//! Finite iterates of fixed points and the count of jumps above a variable.

use std::collections::BTreeMap;

use super::{Entry, Kind, Strategy};
use crate::error::StrategyError;
use crate::term::Name;

/// Iteration count per bound fixed-point variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnfoldMap(pub BTreeMap<Name, usize>);

impl UnfoldMap {
    pub fn new() -> Self {
        UnfoldMap::default()
    }

    /// Maps every variable bound in `s` to `n`.
    pub fn uniform(s: &Strategy, n: usize) -> Self {
        let mut m = BTreeMap::new();
        collect_binders(s, &mut |x| {
            m.insert(x.clone(), n);
        });
        UnfoldMap(m)
    }

    pub fn set(&mut self, x: &str, n: usize) -> &mut Self {
        self.0.insert(Name::from(x), n);
        self
    }

    pub fn get(&self, x: &str) -> Option<usize> {
        self.0.get(x).copied()
    }
}

/// Parses `X=3,Y=2`.
impl std::str::FromStr for UnfoldMap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut m = UnfoldMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (x, n) = part
                .split_once('=')
                .ok_or_else(|| format!("expected `VAR=count`, found `{part}`"))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| format!("`{}` is not a count", n.trim()))?;
            m.set(x.trim(), n);
        }
        Ok(m)
    }
}

fn collect_binders(s: &Strategy, f: &mut impl FnMut(&Name)) {
    if let Kind::Mu(x, _) = s.kind() {
        f(x);
    }
    for c in s.children() {
        collect_binders(c, f);
    }
}

/// `mu^n X. body`: `fail` for `n = 0`, and `body[X := mu^(n-1) X. body]` otherwise.
pub fn iterate(x: &str, body: &Strategy, n: usize) -> Strategy {
    let mut acc = Strategy::fail();
    for _ in 0..n {
        acc = body.subst(x, &acc);
    }
    acc
}

/// Replaces every binder `mu X. S` by the iterate `mu^(map[X]) X. S`,
/// innermost binders first.
pub fn unfold(s: &Strategy, map: &UnfoldMap) -> Result<Strategy, StrategyError> {
    match s.kind() {
        Kind::Fail | Kind::Var(_) | Kind::Insert(_) => Ok(s.clone()),
        Kind::Mu(x, body) => {
            let n = map
                .0
                .get(x)
                .copied()
                .ok_or_else(|| StrategyError::IncompleteMap(x.clone()))?;
            let inner = unfold(body, map)?;
            Ok(iterate(x, &inner, n))
        }
        _ => {
            let kids = s
                .children()
                .into_iter()
                .map(|c| unfold(c, map))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(s.with_children(kids))
        }
    }
}

/// Unfolds every binder `n` times.
pub fn unfold_uniform(s: &Strategy, n: usize) -> Strategy {
    unfold(s, &UnfoldMap::uniform(s, n)).expect("the uniform map covers every binder")
}

/// Number of jumps and `most` constructors between the root of `s` and the
/// single free occurrence of `x`.
pub fn pi_count(s: &Strategy, x: &str) -> Result<usize, StrategyError> {
    let occurrences = s.count_free(x);
    if occurrences != 1 {
        return Err(StrategyError::VariableNotLinear {
            var: Name::from(x),
            occurrences,
        });
    }
    fn walk(s: &Strategy, x: &str) -> usize {
        match s.kind() {
            Kind::Var(_) => 0,
            Kind::Conj(es) => {
                let e: &Entry = es.iter().find(|e| e.body.has_free(x)).expect("occurrence");
                1 + walk(&e.body, x)
            }
            Kind::Most(b) => 1 + walk(b, x),
            _ => {
                let c = s
                    .children()
                    .into_iter()
                    .find(|c| c.has_free(x))
                    .expect("occurrence");
                walk(c, x)
            }
        }
    }
    Ok(walk(s, x))
}
