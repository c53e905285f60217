//! Inputs shared by the engine benchmarks.

use cestrat::oracle::{all_terms, gen_strategy, GenConfig, Stream};
use cestrat::{parse_strategy, Signature, Strategy, Term};

/// The recursive pair that inserts `list([], i)` and `list([], j)` along the
/// first-child spine below two overlapping guards.
pub fn worked_pair() -> (Strategy, Strategy) {
    (
        parse_strategy("mu X. g(?x, b) ; ins <list([], i)> + @1.X").expect("valid strategy"),
        parse_strategy("mu Y. g(f(?w), ?z) ; ins <list([], j)> + @1.Y").expect("valid strategy"),
    )
}

/// `count` seeded strategy pairs of depth at most `depth` over the small signature.
pub fn random_pairs(depth: usize, count: usize) -> Vec<(Strategy, Strategy)> {
    let cfg = GenConfig {
        max_strategy_depth: depth,
        ..GenConfig::default()
    };
    (0..count)
        .map(|i| (gen_strategy(&cfg, i, Stream::Left), gen_strategy(&cfg, i, Stream::Right)))
        .collect()
}

/// Every ground term of depth at most `depth` over the small signature.
pub fn terms(depth: usize) -> Vec<Term> {
    all_terms(&Signature::small(), depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_deterministic() {
        assert_eq!(random_pairs(3, 4), random_pairs(3, 4));
        assert_eq!(terms(1).len(), 8);
        assert!(worked_pair().0.is_mu());
    }
}
