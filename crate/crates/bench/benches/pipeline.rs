//! End-to-end pipeline benchmark: decomposition-accelerated clustering
//! against the no-decomposition baseline on the same graph.

use criterion::{criterion_group, criterion_main, Criterion};
use motifcut_bench::small_world;
use motifcut_core::{run_chief, ChiefConfig, Mode, MotifId};
use std::hint::black_box;

fn chief_vs_baseline(c: &mut Criterion) {
    let g = small_world(2_000, 0.4, 90);
    let chief = ChiefConfig::new(MotifId::M44, 4);
    let mut baseline = chief.clone();
    baseline.mode = Mode::Baseline;

    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("chief", |b| {
        b.iter(|| run_chief(black_box(&g), black_box(&chief)).expect("clean run"));
    });
    group.bench_function("baseline", |b| {
        b.iter(|| run_chief(black_box(&g), black_box(&baseline)).expect("clean run"));
    });
    group.finish();
}

criterion_group!(benches, chief_vs_baseline);
criterion_main!(benches);
