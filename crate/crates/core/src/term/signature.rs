//! Symbol tables.

use std::collections::BTreeMap;
use std::fmt;

use super::{Context, Name, Term};
use crate::error::SignatureError;

/// A table from function symbols to their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<Name, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{a/0, b/0, f/1, g/2}`: the small signature used by the generators.
    pub fn small() -> Self {
        Self::from_pairs(&[("a", 0), ("b", 0), ("f", 1), ("g", 2)])
    }

    /// The small signature extended with the symbols of the worked examples,
    /// lower-cased: `list/2, index/2, var/2, reg/2, d/2` and a few constants.
    pub fn demo() -> Self {
        let mut sig = Self::small();
        for (name, arity) in [
            ("list", 2),
            ("index", 2),
            ("idx", 1),
            ("var", 2),
            ("reg", 2),
            ("d", 2),
            ("i", 0),
            ("j", 0),
            ("u", 0),
            ("x", 0),
            ("omega", 0),
            ("one", 0),
        ] {
            sig.declare(name, arity).expect("demo symbols are consistent");
        }
        sig
    }

    pub fn from_pairs(pairs: &[(&str, usize)]) -> Self {
        let mut sig = Signature::new();
        for (name, arity) in pairs {
            sig.declare(name, *arity).expect("pairs are consistent");
        }
        sig
    }

    /// Number of ground terms of depth at most `depth`, saturating at `u128::MAX`.
    pub fn count_terms_up_to(&self, depth: usize) -> u128 {
        let constants = self.arities.values().filter(|&&a| a == 0).count() as u128;
        let mut count = constants;
        for _ in 0..depth {
            let prev = count;
            count = self.arities.values().fold(0u128, |acc, &a| {
                acc.saturating_add(prev.saturating_pow(a as u32))
            });
        }
        count
    }

    /// All ground terms of depth at most `depth`, constants first and then by
    /// symbol and argument tuple. `None` when there are more than `cap` of them.
    pub fn terms_up_to(&self, depth: usize, cap: usize) -> Option<Vec<Term>> {
        if self.count_terms_up_to(depth) > cap as u128 {
            return None;
        }
        let mut level: Vec<Term> = self.constants().iter().map(|c| Term::App(c.clone(), vec![])).collect();
        for _ in 0..depth {
            let mut next: Vec<Term> = self.constants().iter().map(|c| Term::App(c.clone(), vec![])).collect();
            for (f, &a) in &self.arities {
                if a == 0 || level.is_empty() {
                    continue;
                }
                let mut idx = vec![0usize; a];
                'tuples: loop {
                    next.push(Term::App(f.clone(), idx.iter().map(|&k| level[k].clone()).collect()));
                    let mut k = a;
                    loop {
                        if k == 0 {
                            break 'tuples;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < level.len() {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
            }
            level = next;
        }
        Some(level)
    }

    /// Parses lines of the form `name/arity`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || SignatureError::BadLine {
                line: lineno + 1,
                text: raw.to_string(),
            };
            let (name, arity) = line.rsplit_once('/').ok_or_else(bad)?;
            let name = name.trim();
            let arity: usize = arity.trim().parse().map_err(|_| bad())?;
            if name.is_empty() || !name.chars().next().is_some_and(|c| c.is_ascii_lowercase() || c.is_ascii_digit()) {
                return Err(bad());
            }
            sig.declare(name, arity)?;
        }
        Ok(sig)
    }

    /// Declares `name/arity`, failing if `name` is already declared with another arity.
    pub fn declare(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        match self.arities.get(name) {
            Some(&a) if a != arity => Err(SignatureError::ArityMismatch {
                symbol: name.to_string(),
                declared: a,
                found: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(Name::from(name), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arities.contains_key(name)
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    /// Largest declared arity, 0 for an empty signature.
    pub fn max_arity(&self) -> usize {
        self.arities.values().copied().max().unwrap_or(0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.arities.iter().map(|(n, a)| (n, *a))
    }

    pub fn constants(&self) -> Vec<Name> {
        self.symbols()
            .filter(|(_, a)| *a == 0)
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// Declares every symbol of `t`, checking consistency.
    pub fn absorb_term(&mut self, t: &Term) -> Result<(), SignatureError> {
        if let Term::App(f, args) = t {
            self.declare(f, args.len())?;
            for a in args {
                self.absorb_term(a)?;
            }
        }
        Ok(())
    }

    /// Declares every symbol of `c`, checking consistency.
    pub fn absorb_context(&mut self, c: &Context) -> Result<(), SignatureError> {
        for (f, a) in c.symbols() {
            self.declare(&f, a)?;
        }
        Ok(())
    }

    /// Merges another signature into this one.
    pub fn absorb(&mut self, other: &Signature) -> Result<(), SignatureError> {
        for (n, a) in other.symbols() {
            self.declare(n, a)?;
        }
        Ok(())
    }

    /// Checks that every symbol of `t` is declared with the arity it is used at.
    pub fn check_term(&self, t: &Term) -> Result<(), SignatureError> {
        if let Term::App(f, args) = t {
            match self.arity(f) {
                None => {
                    return Err(SignatureError::Undeclared {
                        symbol: f.to_string(),
                    })
                }
                Some(a) if a != args.len() => {
                    return Err(SignatureError::ArityMismatch {
                        symbol: f.to_string(),
                        declared: a,
                        found: args.len(),
                    })
                }
                Some(_) => {}
            }
            for a in args {
                self.check_term(a)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, a) in self.symbols() {
            writeln!(f, "{n}/{a}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_enumeration_of_the_small_signature() {
        let sig = Signature::small();
        let d1: Vec<String> = sig.terms_up_to(1, 100).unwrap().iter().map(|t| t.to_string()).collect();
        assert_eq!(d1, ["a", "b", "f(a)", "f(b)", "g(a, a)", "g(a, b)", "g(b, a)", "g(b, b)"]);
        assert_eq!(sig.terms_up_to(2, 1000).unwrap().len(), 74);
        assert_eq!(sig.count_terms_up_to(3), 2 + 74 + 74 * 74);
        assert!(sig.terms_up_to(3, 1000).is_none());
        assert!(sig.terms_up_to(2, 1000).unwrap().iter().all(|t| t.depth() <= 2));
    }

    #[test]
    fn parse_lines() {
        let sig = Signature::parse("a/0\n# comment\n g / 2 \n\nf/1").unwrap();
        assert_eq!(sig, Signature::small().without("b"));
    }

    #[test]
    fn conflicting_arity_is_rejected() {
        let mut sig = Signature::small();
        assert!(matches!(
            sig.declare("f", 2),
            Err(SignatureError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn bad_line_reports_line_number() {
        assert_eq!(
            Signature::parse("a/0\nnonsense"),
            Err(SignatureError::BadLine {
                line: 2,
                text: "nonsense".into()
            })
        );
    }

    #[test]
    fn max_arity_and_constants() {
        let sig = Signature::small();
        assert_eq!(sig.max_arity(), 2);
        assert_eq!(sig.constants(), vec![Name::from("a"), Name::from("b")]);
    }

    impl Signature {
        fn without(mut self, name: &str) -> Self {
            self.arities.remove(name);
            self
        }
    }
}
