use criterion::{criterion_group, criterion_main, Criterion};
use fdq_bench::symbol_pair;
use fdq_core::{normal_star, ordering_transform, poisson_bracket, weyl_star, DiffContext, OrderingDirection};
use std::hint::black_box;

fn products(c: &mut Criterion) {
    let (a, b) = symbol_pair();
    let ctx = DiffContext::schrodinger(a.space());
    c.bench_function("poisson_bracket", |bn| bn.iter(|| poisson_bracket(black_box(&a), black_box(&b))));
    c.bench_function("normal_star", |bn| bn.iter(|| normal_star(black_box(&a), black_box(&b), &ctx)));
    c.bench_function("weyl_star", |bn| bn.iter(|| weyl_star(black_box(&a), black_box(&b), &ctx)));
    c.bench_function("ordering_transform", |bn| {
        bn.iter(|| ordering_transform(black_box(&a), &ctx, OrderingDirection::WeylToNormal))
    });
}

criterion_group!(benches, products);
criterion_main!(benches);
