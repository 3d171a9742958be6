use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dominion_bench::{general_position, random, sparse};
use dominion_core::exact::{gamma_bruteforce, gamma_dp, gamma_rangetree};
use dominion_core::fbcsd::lambda_star;
use dominion_core::fpras::{estimate_lambda, FprasConfig};
use dominion_core::ExactNumber;

fn rangetree_float(c: &mut Criterion) {
    let mut g = c.benchmark_group("gamma_rangetree_f64");
    g.sample_size(10);
    for n in [125, 250, 500] {
        let ds = sparse(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ds, |b, ds| {
            b.iter(|| gamma_rangetree::<f64>(ds).unwrap())
        });
    }
    g.finish();
}

fn exact_solvers(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_rational");
    g.sample_size(10);
    for n in [30, 60] {
        let ds = random(n, 2, 3);
        g.bench_with_input(BenchmarkId::new("dp", n), &ds, |b, ds| b.iter(|| gamma_dp::<ExactNumber>(ds).unwrap()));
        g.bench_with_input(BenchmarkId::new("rangetree", n), &ds, |b, ds| {
            b.iter(|| gamma_rangetree::<ExactNumber>(ds).unwrap())
        });
    }
    let ds = random(14, 2, 3);
    g.bench_function("brute/14", |b| b.iter(|| gamma_bruteforce::<ExactNumber>(&ds).unwrap()));
    g.finish();
}

fn all_bases(c: &mut Criterion) {
    let mut g = c.benchmark_group("lambda_star_f64");
    g.sample_size(10);
    for n in [10, 20] {
        let ds = general_position(n, 5);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ds, |b, ds| b.iter(|| lambda_star::<f64>(ds).unwrap()));
    }
    g.finish();
}

fn estimator(c: &mut Criterion) {
    let ds = random(8, 3, 7);
    let cfg = FprasConfig::new(ExactNumber::new(1, 4), 1).with_samples(10_000);
    c.bench_function("estimate_lambda/8x10000", |b| b.iter(|| estimate_lambda(&ds, &cfg).unwrap()));
}

criterion_group!(benches, rangetree_float, exact_solvers, all_bases, estimator);
criterion_main!(benches);
