use criterion::{criterion_group, criterion_main, Criterion};
use fdq_bench::small_lattice;
use fdq_core::dynamics::{OperatorMatrix, Propagator};

fn evolution(c: &mut Criterion) {
    let cfg = small_lattice();
    let prop = Propagator::new(&cfg).unwrap();
    let id = OperatorMatrix::identity(prop.dim());
    let mut group = c.benchmark_group("lattice_64");
    group.sample_size(10);
    group.bench_function("evolve", |b| b.iter(|| prop.evolve_operator(&id).unwrap()));
    group.bench_function("dyson_2", |b| b.iter(|| prop.dyson(2).unwrap()));
    group.finish();
}

criterion_group!(benches, evolution);
criterion_main!(benches);
