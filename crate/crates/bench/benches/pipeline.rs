use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use schur_lattice::building::{fix_bfs, BfsOptions};
use schur_lattice::dvr::hnf_dvr;
use schur_lattice::generators::standard_generators;
use schur_lattice::{compute_order, Matrix, OrderOptions, PAdicRationals, SchurModule, ValuedField};

const SHAPES: &[(usize, &str)] = &[(2, "2"), (3, "2,1"), (3, "3,1"), (3, "4")];

fn rho(c: &mut Criterion) {
    let f = PAdicRationals::new(3).unwrap();
    let mut group = c.benchmark_group("rho");
    for &(n, shape) in SHAPES {
        let module = SchurModule::new(n, shape.parse().unwrap()).unwrap();
        let g = standard_generators(&f, n, 2).into_iter().fold(Matrix::identity(&f, n), |acc, x| acc.mul(&f, &x));
        group.bench_with_input(BenchmarkId::new(format!("n={n}"), shape), &g, |b, g| {
            b.iter(|| module.rho(&f, black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn hnf(c: &mut Criterion) {
    let f = PAdicRationals::new(2).unwrap();
    let mut group = c.benchmark_group("hnf");
    for dim in [4usize, 9, 16] {
        let vectors: Vec<Vec<_>> =
            (0..2 * dim).map(|i| (0..dim).map(|j| f.from_i64(((i * 7 + j * 13) % 17) as i64 - 8)).collect()).collect();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &vectors, |b, v| {
            b.iter(|| hnf_dvr(&f, dim, black_box(v)))
        });
    }
    group.finish();
}

fn order(c: &mut Criterion) {
    let mut group = c.benchmark_group("order");
    group.sample_size(10);
    for &(n, shape) in SHAPES {
        for p in [2u32, 3] {
            let f = PAdicRationals::new(p).unwrap();
            let module = SchurModule::new(n, shape.parse().unwrap()).unwrap();
            group.bench_function(BenchmarkId::new(format!("n={n} p={p}"), shape), |b| {
                b.iter(|| compute_order(&f, &module, &OrderOptions::default()).unwrap().module.rank())
            });
        }
    }
    group.finish();
}

fn fix(c: &mut Criterion) {
    let mut group = c.benchmark_group("fix_bfs");
    group.sample_size(10);
    for (n, shape, p) in [(2usize, "2", 2u32), (3, "2", 2), (3, "2,1", 3), (3, "3,1", 2)] {
        let f = PAdicRationals::new(p).unwrap();
        let module = SchurModule::new(n, shape.parse().unwrap()).unwrap();
        let h = compute_order(&f, &module, &OrderOptions::default()).unwrap().module;
        group.bench_function(BenchmarkId::new(format!("n={n} p={p}"), shape), |b| {
            b.iter(|| fix_bfs(&f, &h, &BfsOptions::default()).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(benches, rho, hnf, order, fix);
criterion_main!(benches);
