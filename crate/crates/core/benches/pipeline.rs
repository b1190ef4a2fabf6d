use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tevtrop::construction::{enumerate_solutions_full, reference_point};
use tevtrop::counting::tevelev_degree_with;
use tevtrop::oracle::run_oracle;
use tevtrop::ExecMode;

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn solutions(c: &mut Criterion) {
    let mut group = c.benchmark_group("solutions");
    group.sample_size(10);
    for g in [4, 6] {
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, g), &g, |b, &g| {
                b.iter(|| enumerate_solutions_full(black_box(g), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn degree(c: &mut Criterion) {
    let mut group = c.benchmark_group("tevelev_degree");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 5), &5, |b, &g| b.iter(|| tevelev_degree_with(black_box(g), mode).unwrap()));
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let base = reference_point(1).default_base();
    for (name, mode) in MODES {
        group.bench_function(name, |b| b.iter(|| run_oracle(black_box(&base), mode).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, solutions, degree, oracle);
criterion_main!(benches);
