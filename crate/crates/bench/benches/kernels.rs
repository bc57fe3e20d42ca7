use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ncdomain::fock::{build_shifts, poisson_kernel};
use ncdomain::iso::obstruction_search;
use ncdomain::sampling;
use ncdomain::weights::compute_weights;
use ncdomain::Symbol;

fn f() -> Symbol {
    Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 1.0)]).unwrap()
}

fn g() -> Symbol {
    Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 0.5), ("21", 0.5)]).unwrap()
}

fn weights(c: &mut Criterion) {
    let mut group = c.benchmark_group("compute_weights");
    for len in [8, 12, 16] {
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |b, &len| {
            b.iter(|| compute_weights(black_box(&f()), len).unwrap())
        });
    }
    group.finish();
}

fn shifts(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_shifts");
    for len in [6, 10, 14] {
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |b, &len| {
            b.iter(|| build_shifts(black_box(&g()), len).unwrap())
        });
    }
    group.finish();
}

fn poisson(c: &mut Criterion) {
    let t = sampling::row_contraction(&mut sampling::rng(0), 2, 2, 0.5);
    let sym = Symbol::linear(2);
    let mut group = c.benchmark_group("poisson_kernel");
    group.sample_size(10);
    for len in [7, 10, 14] {
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |b, &len| {
            b.iter(|| poisson_kernel(&sym, black_box(&t), len).unwrap())
        });
    }
    group.finish();
}

fn obstruction(c: &mut Criterion) {
    let mut group = c.benchmark_group("obstruction_search");
    for dmax in [2, 4] {
        group.bench_with_input(BenchmarkId::new("flagship", dmax), &dmax, |b, &dmax| {
            b.iter(|| obstruction_search(&f(), &g(), dmax, black_box(10001)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, weights, shifts, poisson, obstruction);
criterion_main!(benches);
