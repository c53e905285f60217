//! Invariants checked on seeded random inputs.

use std::collections::BTreeMap;

use cestrat::oracle::{random_context, random_mu_body, random_pattern, random_strategy, random_term, Stream};
use cestrat::oracle::{engine_options, GenConfig};
use cestrat::pos::{canonicalize, combine_pos, eq_pos, is_well_founded, unify_pos, PosCe};
use cestrat::strategy::{eval_outcome, iterate, unfold_uniform, validate, DepthMeasure};
use cestrat::term::{apply_subst, match_term, mgu};
use cestrat::unify::{FocusOrder, PreCe, Tuple};
use cestrat::{
    Kind, apply_pos_ce, eval, parse_strategy, psi, Context, EngineOptions, MergeMode, Position, Session, Signature,
    Strategy, Term,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sig() -> Signature {
    Signature::small()
}

fn term(seed: u64) -> Term {
    random_term(&sig(), 3, &mut rng(seed))
}

fn strategy(seed: u64) -> Strategy {
    random_strategy(&sig(), 4, 2, &mut rng(seed))
}

fn context(seed: u64) -> Context {
    random_context(&sig(), &mut rng(seed))
}

/// A well-founded list over positions of `t`, deepest positions first but
/// otherwise in random order.
fn pos_ce(t: &Term, seed: u64) -> PosCe {
    let mut r = rng(seed);
    let mut ps = t.positions();
    ps.shuffle(&mut r);
    ps.truncate(3);
    ps.sort_by_key(|p| std::cmp::Reverse(p.len()));
    let entries = ps.into_iter().map(|p| (p, random_context(&sig(), &mut r))).collect();
    PosCe::from_entries(entries)
}

/// Inserts every context of `e` at once, bottom-up: the children are
/// rewritten first and the context at a node then wraps the result.
fn insert_all(e: &PosCe, t: &Term) -> Option<Term> {
    let PosCe::List(entries) = e else { return None };
    let map: BTreeMap<&Position, &Context> = entries.iter().map(|(p, c)| (p, c)).collect();
    if map.keys().any(|p| !t.has_position(p)) {
        return None;
    }
    fn go(t: &Term, here: Position, map: &BTreeMap<&Position, &Context>) -> Term {
        let node = match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().enumerate().map(|(i, a)| go(a, here.push(i + 1), map)).collect(),
            ),
        };
        match map.get(&here) {
            Some(c) => c.fill(node),
            None => node,
        }
    }
    Some(go(t, Position::root(), &map))
}

/// Whether `x` occurs free below a fixed-point binder of `s`.
fn under_inner_binder(s: &Strategy, x: &str) -> bool {
    match s.kind() {
        Kind::Mu(y, body) => &**y != x && body.has_free(x),
        _ => s.children().into_iter().any(|c| under_inner_binder(c, x)),
    }
}

fn session() -> Session {
    Session::new(engine_options(&GenConfig::default()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn replacing_a_subterm_by_itself(seed: u64) {
        let t = term(seed);
        for p in t.positions() {
            let sub = t.subterm_at(&p).unwrap().clone();
            prop_assert_eq!(t.replace_at(&p, sub).unwrap(), t.clone());
        }
    }

    #[test]
    fn filling_keeps_the_positions_below_the_hole(c: u64, s: u64) {
        let (tau, t) = (context(c), term(s));
        let filled = tau.fill(t.clone());
        for q in t.positions() {
            prop_assert!(filled.has_position(&tau.hole_position().concat(&q)));
        }
    }

    #[test]
    fn nest_merge_is_associative_with_the_hole_as_unit(a: u64, b: u64, c: u64) {
        let (x, y, z) = (context(a), context(b), context(c));
        let m = MergeMode::Nest;
        prop_assert_eq!(x.merge(&y, m).merge(&z, m), x.merge(&y.merge(&z, m), m));
        prop_assert_eq!(Context::hole().merge(&x, m), x.clone());
        prop_assert_eq!(x.merge(&Context::hole(), m), x);
    }

    #[test]
    fn matching_and_unifiers_are_sound(p: u64, s: u64, u: u64) {
        let pattern = random_pattern(&sig(), 2, &mut rng(p));
        let t = term(s);
        if let Some(sigma) = match_term(&pattern, &t) {
            prop_assert_eq!(apply_subst(&sigma, &pattern), t.clone());
        }
        let other = random_pattern(&sig(), 2, &mut rng(u));
        if let Some(g) = mgu(&pattern, &other) {
            prop_assert_eq!(apply_subst(&g, &pattern), apply_subst(&g, &other));
        }
    }

    #[test]
    fn position_based_laws(s: u64, a: u64, b: u64, c: u64) {
        let t = term(s);
        let (e1, e2, e3) = (pos_ce(&t, a), pos_ce(&t, b), pos_ce(&t, c));
        for m in [MergeMode::Nest, MergeMode::LeftProject] {
            let u = |x: &PosCe, y: &PosCe| unify_pos(x, y, m).unwrap();
            let k = |x: &PosCe, y: &PosCe| combine_pos(x, y, m).unwrap();
            prop_assert!(eq_pos(&u(&u(&e1, &e2), &e3), &u(&e1, &u(&e2, &e3))));
            prop_assert!(eq_pos(&k(&k(&e1, &e2), &e3), &k(&e1, &k(&e2, &e3))));
            // The unit adds a root entry inserting the hole, so the law holds
            // for the resulting terms rather than for the lists themselves.
            let unit = PosCe::single(Position::root(), Context::hole());
            let outcome = Some(t.clone());
            prop_assert_eq!(apply_pos_ce(&u(&e1, &unit), &outcome), apply_pos_ce(&e1, &outcome));
            // Left projection keeps the left context, so there the hole is only a right unit.
            if m == MergeMode::Nest {
                prop_assert_eq!(apply_pos_ce(&u(&unit, &e1), &outcome), apply_pos_ce(&e1, &outcome));
            }
            prop_assert!(eq_pos(&k(&PosCe::Fail, &e1), &e1));
            prop_assert!(eq_pos(&u(&PosCe::Fail, &e1), &PosCe::Fail));
        }
        prop_assert!(eq_pos(&unify_pos(&e1, &e1, MergeMode::LeftProject).unwrap(), &e1));
    }

    #[test]
    fn canonical_order_and_insertion_order_do_not_matter(s: u64, a: u64) {
        let t = term(s);
        let e = pos_ce(&t, a);
        prop_assert!(is_well_founded(&e).is_ok());
        let outcome = Some(t.clone());
        prop_assert_eq!(apply_pos_ce(&canonicalize(&e).unwrap(), &outcome), apply_pos_ce(&e, &outcome));
        prop_assert_eq!(apply_pos_ce(&e, &outcome), insert_all(&e, &t));
    }

    #[test]
    fn fixed_points_stabilise_after_depth_plus_one(seed: u64, s: u64) {
        let body = random_mu_body(&sig(), "X", 4, 2, &mut rng(seed));
        let t = term(s);
        let reference = eval(&Strategy::mu("X", body.clone()), &t).unwrap();
        for m in 0..3 {
            prop_assert_eq!(eval(&iterate("X", &body, t.depth() + 1 + m), &t).unwrap(), reference.clone());
        }
    }

    #[test]
    fn unfolding_lowers_the_depth_measure(seed: u64, n in 0usize..4) {
        let body = random_mu_body(&sig(), "X", 4, 2, &mut rng(seed));
        prop_assume!(!under_inner_binder(&body, "X"));
        let mu = Strategy::mu("X", body.clone());
        prop_assert!(DepthMeasure::of(&iterate("X", &body, n)) < DepthMeasure::of(&mu));
    }

    #[test]
    fn choice_is_left_biased_and_failure_propagates(a: u64, b: u64, s: u64) {
        let (x, y, t) = (strategy(a), strategy(b), term(s));
        let left = eval(&x, &t).unwrap();
        if left.is_some() {
            prop_assert_eq!(eval(&Strategy::choice(x.clone(), y), &t).unwrap(), left);
        }
        prop_assert_eq!(eval_outcome(&x, &None).unwrap(), None);
    }

    #[test]
    fn psi_is_a_homomorphism_and_idempotent(a: u64, s: u64) {
        let (x, t) = (strategy(a), term(s));
        let e = psi(&x, &t).unwrap();
        prop_assert!(is_well_founded(&e).is_ok());
        prop_assert_eq!(apply_pos_ce(&e, &Some(t.clone())), eval(&x, &t).unwrap());
        prop_assert!(eq_pos(&psi(&e.to_strategy(), &t).unwrap(), &e));
    }

    #[test]
    fn equal_compilations_give_equal_results(a: u64, b: u64) {
        let (x, y) = (strategy(a), strategy(b));
        for t in sig().terms_up_to(2, 1000).unwrap() {
            if eq_pos(&psi(&x, &t).unwrap(), &psi(&y, &t).unwrap()) {
                prop_assert_eq!(eval(&x, &t).unwrap(), eval(&y, &t).unwrap());
            }
        }
    }

    #[test]
    fn unification_is_deterministic_monotone_and_tuple_free(a: u64, b: u64) {
        let (x, y) = (strategy(a), strategy(b));
        let u1 = session().unify(&x, &y).unwrap();
        let u2 = session().unify(&x, &y).unwrap();
        prop_assert_eq!(u1.to_string(), u2.to_string());
        let v = validate(&u1);
        prop_assert!(v.closed && v.monotone, "{:?}", v.diagnostics);

        let mut stepwise = Session::new(EngineOptions { simplify: false, ..engine_options(&GenConfig::default()) });
        let mut p = PreCe::tuple(Tuple::new(x.clone(), y.clone()));
        let mut steps = 0;
        while let Some((_, next)) = stepwise.reduce_step(&p).unwrap() {
            p = next;
            steps += 1;
        }
        prop_assert_eq!(p.tuple_count(), 0);
        prop_assert!(p.into_strategy().is_some());
        prop_assert!(steps > 0);
    }

    #[test]
    fn focus_order_does_not_change_the_semantics(a: u64, b: u64, s: u64) {
        let (x, y) = (strategy(a), strategy(b));
        let outer = session().unify(&x, &y).unwrap();
        let inner = Session::new(EngineOptions {
            focus: FocusOrder::RightmostInnermost,
            ..engine_options(&GenConfig::default())
        })
        .unify(&x, &y)
        .unwrap();
        for k in 0..4 {
            let t = term(s.wrapping_add(k));
            prop_assert_eq!(eval(&outer, &t).unwrap(), eval(&inner, &t).unwrap());
        }
    }

    #[test]
    fn unfolding_fixed_point_free_strategies_is_the_identity(a: u64, n in 0usize..3) {
        let x = strategy(a);
        if x.free_vars().is_empty() && !format!("{x}").contains("mu ") {
            prop_assert_eq!(unfold_uniform(&x, n), x);
        }
    }
}

#[test]
fn equal_semantics_do_not_force_equal_compilations() {
    // Both leave every term unchanged, but insert the hole at different positions.
    let x = parse_strategy("most(ins <[]>) + ins <[]>").unwrap();
    let y = parse_strategy("ins <[]>").unwrap();
    for t in sig().terms_up_to(2, 1000).unwrap() {
        assert_eq!(eval(&x, &t).unwrap(), eval(&y, &t).unwrap());
    }
    let t = cestrat::parse_term("f(a)").unwrap();
    assert!(!eq_pos(&psi(&x, &t).unwrap(), &psi(&y, &t).unwrap()));
}

#[test]
fn unfolding_below_an_inner_binder_can_keep_the_star_height() {
    // The iterate nests a copy of the inner binder inside itself, so the star
    // height stays at 2 while the tree depth grows.
    let body = parse_strategy("mu Y. @1.Y + @2.X").unwrap();
    let mu = Strategy::mu("X", body.clone());
    assert_eq!(DepthMeasure::of(&mu).as_pair(), [2, 2]);
    let twice = DepthMeasure::of(&iterate("X", &body, 2));
    assert_eq!(twice.as_pair()[0], 2);
    assert!(twice > DepthMeasure::of(&mu));
}

#[test]
fn stream_indices_are_independent() {
    let cfg = GenConfig::default();
    let a = cestrat::oracle::gen_strategy(&cfg, 3, Stream::Left);
    let b = cestrat::oracle::gen_strategy(&cfg, 3, Stream::Right);
    assert_ne!(a, b);
}
