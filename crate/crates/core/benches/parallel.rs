//! One worker against the full pool on the data-parallel kernels.
//! Build with `--no-default-features` to time the plain sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dsssp::arith::Rational;
use dsssp::clusters::{compute_clusters, compute_priorities};
use dsssp::detection::detect_brute;
use dsssp::graph::{all_pairs, GeneratorSpec, Graph};
use dsssp::hopset::{hop_set, sample_sources, verify_hop_set};
use dsssp::par;
use std::hint::black_box;
use std::time::Duration;

fn graph(spec: &str) -> Graph {
    GeneratorSpec::parse(spec).unwrap().build().unwrap()
}

fn pools() -> [(&'static str, usize); 2] {
    [("1-thread", 1), ("pool", std::thread::available_parallelism().map_or(1, |n| n.get()))]
}

fn bench_clusters(c: &mut Criterion) {
    let g = graph("random:1024,4096,16,7");
    let h = compute_priorities(&g, 2, 64);
    let mut group = c.benchmark_group("clusters");
    for (name, t) in pools() {
        group.bench_with_input(BenchmarkId::new(name, t), &t, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(compute_clusters(&g, &h, 64))))
        });
    }
    group.finish();
}

fn bench_detection(c: &mut Criterion) {
    let g = graph("grid:32,32,8,3");
    let sources: Vec<_> = (0..g.n()).step_by(5).collect();
    let mut group = c.benchmark_group("detect_brute");
    for (name, t) in pools() {
        group.bench_with_input(BenchmarkId::new(name, t), &t, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(detect_brute(&g, &sources, 40, 6))))
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let g = graph("random:512,2048,32,11");
    let eps = Rational::new(1, 2);
    let hs = hop_set(&g, eps, g.max_weight());
    let bound = hs.factor;
    let sources = sample_sources(g.n(), 500, 1);
    let mut group = c.benchmark_group("verify_hop_set");
    for (name, t) in pools() {
        group.bench_with_input(BenchmarkId::new(name, t), &t, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(verify_hop_set(&g, &hs.edges, hs.hop_bound, bound, &sources))))
        });
    }
    group.finish();
}

fn bench_all_pairs(c: &mut Criterion) {
    let g = graph("random:768,3072,64,5");
    let mut group = c.benchmark_group("all_pairs");
    for (name, t) in pools() {
        group.bench_with_input(BenchmarkId::new(name, t), &t, |b, &t| {
            b.iter(|| par::with_threads(t, || black_box(all_pairs(&g))))
        });
    }
    group.finish();
}

fn config() -> Criterion {
    Criterion::default().sample_size(10).warm_up_time(Duration::from_millis(500)).measurement_time(Duration::from_secs(3))
}

criterion_group!(name = benches; config = config(); targets = bench_clusters, bench_detection, bench_verify, bench_all_pairs);
criterion_main!(benches);
