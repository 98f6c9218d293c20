use std::collections::BTreeSet;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypercomb_core::intsets::WindowSample;
use hypercomb_core::strcalc::{closure_oracle, CoeffString};
use hypercomb_core::{jin, Limits, Rational};

fn random_window(m: i64, density: f64, seed: u64) -> WindowSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = (0..m).map(|_| rng.gen_bool(density)).collect();
    WindowSample::new(1, m, bits).unwrap()
}

fn bench_jin_scan(c: &mut Criterion) {
    let w = random_window(10_000, 0.3, 42);
    let beta = Rational::new(2, 5);
    let mut group = c.benchmark_group("jin_xi_scan");
    for threads in [1usize, 4] {
        group.bench_with_input(BenchmarkId::from_parameter(threads), &threads, |b, &t| {
            b.iter(|| jin::xi_search(&w, 18, beta, t).unwrap())
        });
    }
    group.finish();
}

fn bench_closure_oracle(c: &mut Criterion) {
    let alphabet: BTreeSet<i64> = [-1, 0, 1, 2].into();
    let limits = Limits::default();
    let mut group = c.benchmark_group("closure_oracle");
    group.sample_size(10);
    for len in [6usize, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |b, &l| {
            b.iter(|| closure_oracle(&CoeffString::new(vec![2, 1]), l, &alphabet, &limits).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_jin_scan, bench_closure_oracle);
criterion_main!(benches);
