use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use radlayer::{estimate_generic, generic_socdim, DimVec3};
use radlayer_bench::{algebra, random_matrix, sample};

fn rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    for size in [8, 32, 64] {
        let m = random_matrix(size, 1);
        group.bench_with_input(BenchmarkId::from_parameter(size), &m, |b, m| b.iter(|| black_box(m.rank())));
    }
    group.finish();
}

fn layerings(c: &mut Criterion) {
    let mut group = c.benchmark_group("raddim");
    for (n, d) in [(2, DimVec3::new(2, 3, 2)), (2, DimVec3::new(4, 6, 5)), (3, DimVec3::new(3, 6, 8))] {
        let rep = sample(&algebra(n), d, 7);
        group.bench_with_input(BenchmarkId::new(format!("n{n}"), d), &rep, |b, r| {
            b.iter(|| (black_box(r.raddim()), black_box(r.socdim())))
        });
    }
    group.finish();
    c.bench_function("generic_socdim/n2_d60", |b| {
        b.iter(|| DimVec3::with_total(60).filter_map(|d| generic_socdim(2, d).ok()).count())
    });
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    group.sample_size(10);
    for (n, d) in [(2, DimVec3::new(2, 2, 3)), (3, DimVec3::new(3, 5, 6))] {
        let alg = algebra(n);
        group.bench_function(BenchmarkId::new(format!("n{n}"), d), |b| {
            let mut seed = 0;
            b.iter(|| {
                seed += 1;
                black_box(sample(&alg, d, seed))
            })
        });
        group.bench_function(BenchmarkId::new(format!("estimate20_n{n}"), d), |b| {
            b.iter(|| black_box(estimate_generic(&alg, d, 20, 3).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, rank, layerings, sampling);
criterion_main!(benches);
