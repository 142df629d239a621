//! Minimum-cut benchmarks: exact Stoer–Wagner on small graphs and the
//! bounded certification path on larger well-connected ones.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use motifcut_bench::small_world;
use motifcut_core::{sw_mincut, sw_mincut_bounded};
use std::hint::black_box;

fn exact_mincut(c: &mut Criterion) {
    let mut group = c.benchmark_group("sw_mincut");
    for nv in [100usize, 300] {
        let g = small_world(nv, 0.3, 7);
        group.bench_with_input(BenchmarkId::from_parameter(nv), &g, |b, g| {
            b.iter(|| sw_mincut(black_box(g)).expect("connected"));
        });
    }
    group.finish();
}

fn bounded_certification(c: &mut Criterion) {
    let mut group = c.benchmark_group("sw_mincut_bounded");
    group.sample_size(20);
    // rrp 0.4 keeps the graph essentially 4-edge-connected, so k = 4 takes
    // the expensive certification path rather than an early cut exit.
    for nv in [1_000usize, 4_000] {
        let g = small_world(nv, 0.4, 7);
        group.bench_with_input(BenchmarkId::from_parameter(nv), &g, |b, g| {
            b.iter(|| sw_mincut_bounded(black_box(g), 4).expect("connected"));
        });
    }
    group.finish();
}

criterion_group!(benches, exact_mincut, bounded_certification);
criterion_main!(benches);
