use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lcc_bench::{gaussian, high_dimensional, shape};
use lcc_core::data::Shape;
use lcc_core::kernel::{train_klcc, KernelSpec};
use lcc_core::lcc::{assemble_lcc_lp, train_fqcc};
use lcc_core::lp::solve;
use lcc_core::{train_lcc, DEFAULT_LAMBDA, DEFAULT_SIGMA};

fn lcc(c: &mut Criterion) {
    let mut group = c.benchmark_group("lcc");
    for per_class in [50, 200, 500] {
        let d = gaussian(per_class, 1);
        group.bench_with_input(BenchmarkId::new("gaussian", 2 * per_class), &d, |b, d| {
            b.iter(|| train_lcc(black_box(d), DEFAULT_LAMBDA, DEFAULT_SIGMA).unwrap())
        });
    }
    let d = high_dimensional(300, 20);
    group.bench_function("overlap_300x20", |b| {
        b.iter(|| train_lcc(black_box(&d), DEFAULT_LAMBDA, DEFAULT_SIGMA).unwrap())
    });
    group.finish();
}

fn fqcc(c: &mut Criterion) {
    let d = gaussian(100, 1);
    c.bench_function("fqcc/gaussian/200", |b| {
        b.iter(|| train_fqcc(black_box(&d), DEFAULT_LAMBDA, DEFAULT_SIGMA, 8, 0).unwrap())
    });
}

fn klcc(c: &mut Criterion) {
    let mut group = c.benchmark_group("klcc");
    group.sample_size(10);
    let spec = KernelSpec::rbf(0.3).unwrap();
    for m in [100, 300] {
        let d = shape(Shape::Circles, m, 1);
        group.bench_with_input(BenchmarkId::new("circles_rbf", m), &d, |b, d| {
            b.iter(|| train_klcc(black_box(d), &spec, DEFAULT_LAMBDA, DEFAULT_SIGMA).unwrap())
        });
    }
    group.finish();
}

fn lp(c: &mut Criterion) {
    let problem =
        assemble_lcc_lp(&high_dimensional(200, 10), DEFAULT_LAMBDA, DEFAULT_SIGMA).unwrap();
    c.bench_function("lp/solve_lcc_200x10", |b| {
        b.iter(|| solve(black_box(&problem)).unwrap())
    });
}

criterion_group!(benches, lcc, fqcc, klcc, lp);
criterion_main!(benches);
