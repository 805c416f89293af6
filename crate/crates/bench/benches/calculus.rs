use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dualgraph::chain::standardize_chain_graph;
use dualgraph::generate::{random_chain_from, random_tree, seeded};
use dualgraph::lattice::discriminant_by_splitting;
use dualgraph::{certify, discriminant, enumerate_fibers, CuspPair, WeightedGraph};

fn discriminants(c: &mut Criterion) {
    let mut group = c.benchmark_group("discriminant");
    for len in [16usize, 64, 256] {
        let entries: Vec<i64> = (0..len).map(|i| 2 + (i % 3) as i64).collect();
        let chain = WeightedGraph::chain_of_type(&entries);
        group.bench_with_input(BenchmarkId::new("bareiss_chain", len), &chain, |b, g| {
            b.iter(|| discriminant(black_box(&g.whole())))
        });
        group.bench_with_input(BenchmarkId::new("splitting_chain", len), &chain, |b, g| {
            b.iter(|| discriminant_by_splitting(black_box(&g.whole())))
        });
    }
    let tree = random_tree(&mut seeded(3), 64, -5..=2);
    group.bench_function("bareiss_tree_64", |b| b.iter(|| discriminant(black_box(&tree.whole()))));
    group.finish();
}

fn fibers(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_fibers");
    group.sample_size(10);
    for max in [5usize, 7] {
        group.bench_with_input(BenchmarkId::from_parameter(max), &max, |b, &n| {
            b.iter(|| enumerate_fibers(n))
        });
    }
    group.finish();
}

fn standard_forms(c: &mut Criterion) {
    let g = random_chain_from(&mut seeded(5), &[0, 0], 20);
    c.bench_function("standardize_random_plane_chain", |b| {
        b.iter(|| standardize_chain_graph(black_box(&g)))
    });
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    for (n, m) in [(3u64, 2u64), (13, 8), (29, 17)] {
        let p = CuspPair::new(n, m).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{n}_{m}")), &p, |b, &p| {
            b.iter(|| certify(p))
        });
    }
    group.finish();
}

criterion_group!(benches, discriminants, fibers, standard_forms, pipeline);
criterion_main!(benches);
