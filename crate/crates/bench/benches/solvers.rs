use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use potts_bench::pair_cases;
use potts_core::{solve_pair_system, solve_system6, solve_ti, BoundaryMatrix, ScalarKind, SolverConfig};
use std::hint::black_box;

fn ti(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut group = c.benchmark_group("solve_ti");
    for theta in [3.0, 5.0, 20.0] {
        group.bench_with_input(BenchmarkId::from_parameter(theta), &theta, |b, &t| {
            b.iter(|| solve_ti(black_box(2), black_box(t), &cfg).unwrap())
        });
    }
    group.finish();
}

fn pair(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut group = c.benchmark_group("solve_pair_system");
    for (name, m) in pair_cases() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &m, |b, m| {
            b.iter(|| solve_pair_system(black_box(m), 6.0, ScalarKind::F, &cfg).unwrap())
        });
    }
    group.finish();
}

fn system6(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let m = BoundaryMatrix::new(0, 3, 3, 0).unwrap();
    c.bench_function("solve_system6/0,3,3,0", |b| {
        b.iter(|| solve_system6(black_box(&m), 6.0, &cfg).unwrap())
    });
}

criterion_group!(benches, ti, pair, system6);
criterion_main!(benches);
