//! Throughput of the variance estimators and the sampler. Build with
//! `--no-default-features` to measure the sequential fallback; the parallel
//! build also reports a one-thread pool for comparison.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use netjack_core::functionals::{RhoMode, StatKind, Statistic};
use netjack_core::par;
use netjack_core::resampling::{jackknife, subsample_variance};
use netjack_core::sim::{three_block_sbm, sample_graph};

#[cfg(feature = "parallel")]
const MODE: &str = "parallel";
#[cfg(not(feature = "parallel"))]
const MODE: &str = "sequential";

fn thread_variants() -> Vec<(String, Option<usize>)> {
    let mut v = vec![(MODE.to_string(), None)];
    if par::is_parallel() {
        v.push(("parallel-1thread".to_string(), Some(1)));
    }
    v
}

fn bench_jackknife(c: &mut Criterion) {
    let g = sample_graph(&three_block_sbm(), 1000, 11).unwrap().graph;
    let stat = Statistic::new(StatKind::TriangleDensity, RhoMode::Known(1.0));
    let mut group = c.benchmark_group("jackknife_triangle_n1000");
    group.sample_size(10);
    for (label, threads) in thread_variants() {
        group.bench_function(label, |b| {
            b.iter(|| par::with_threads(threads, || jackknife(black_box(&g), &stat).unwrap()))
        });
    }
    group.finish();
}

fn bench_subsample(c: &mut Criterion) {
    let g = sample_graph(&three_block_sbm(), 1000, 11).unwrap().graph;
    let stat = Statistic::new(StatKind::TriangleDensity, RhoMode::Known(1.0));
    let mut group = c.benchmark_group("subsample_triangle_n1000_b200_B200");
    group.sample_size(10);
    for (label, threads) in thread_variants() {
        group.bench_function(label, |b| {
            b.iter(|| par::with_threads(threads, || subsample_variance(black_box(&g), &stat, 200, 200, 3).unwrap()))
        });
    }
    group.finish();
}

fn bench_sampling(c: &mut Criterion) {
    let model = three_block_sbm();
    let mut group = c.benchmark_group("sample_sbm_n2000");
    group.sample_size(10);
    for (label, threads) in thread_variants() {
        group.bench_function(label, |b| {
            b.iter(|| par::with_threads(threads, || sample_graph(&model, black_box(2000), 5).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_jackknife, bench_subsample, bench_sampling);
criterion_main!(benches);
