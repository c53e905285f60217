use std::hint::black_box;

use cestrat::{eval, psi, unify, Strategy};
use cestrat_bench::{random_pairs, terms, worked_pair};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn unification(c: &mut Criterion) {
    let (s, r) = worked_pair();
    c.bench_function("unify/worked_pair", |b| b.iter(|| unify(black_box(&s), black_box(&r)).unwrap()));

    let mut group = c.benchmark_group("unify/random");
    for depth in [2, 3] {
        let pairs = random_pairs(depth, 16);
        group.bench_with_input(BenchmarkId::from_parameter(depth), &pairs, |b, pairs| {
            b.iter(|| {
                for (s, r) in pairs {
                    black_box(unify(s, r).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn semantics(c: &mut Criterion) {
    let (s, r) = worked_pair();
    let u: Strategy = unify(&s, &r).unwrap();
    let ts = terms(2);
    c.bench_function("eval/worked_unifier", |b| {
        b.iter(|| {
            for t in &ts {
                black_box(eval(&u, t).unwrap());
            }
        })
    });
    c.bench_function("psi/worked_unifier", |b| {
        b.iter(|| {
            for t in &ts {
                black_box(psi(&u, t).unwrap());
            }
        })
    });
}

criterion_group!(benches, unification, semantics);
criterion_main!(benches);
