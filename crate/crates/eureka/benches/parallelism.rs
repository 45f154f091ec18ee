//! Parallel-versus-sequential benchmarks for the data-parallel inner loops:
//! Monte Carlo Borda counting, the stability harness, and the per-K sweep.
//!
//! The default build fans these loops out over rayon;
//! `eureka::parallel::sequential` pins the same code to one thread, so both
//! paths are measured from one binary. Building with
//! `--no-default-features` makes the parallel entries identical to the
//! sequential ones.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eureka::data::{DesignMatrix, FeatureGroup};
use eureka::judge::{FeatureRef, MockJudge, PreferenceMatrix};
use eureka::parallel;
use eureka::ranking::{borda_count, stability_experiment, RankMethod, RankTask, Ranking};
use eureka::selection::eureka_sweep;
use ndarray::Array2;
use std::hint::black_box;

fn btl_matrix(m: usize) -> PreferenceMatrix {
    let strengths: Vec<f64> = (0..m).map(|i| (m - i) as f64 * 0.4).collect();
    let p = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        0.5
                    } else {
                        1.0 / (1.0 + (strengths[j] - strengths[i]).exp())
                    }
                })
                .collect()
        })
        .collect();
    PreferenceMatrix::new((0..m).map(|i| format!("feature_{i}")).collect(), p).unwrap()
}

fn bench_borda_count(c: &mut Criterion) {
    let matrix = btl_matrix(16);
    let judge = MockJudge::new(matrix.clone(), 7);
    let features: Vec<FeatureRef> = matrix.names.iter().map(FeatureRef::named).collect();
    let task = RankTask::new("benchmark task", "y");

    let mut group = c.benchmark_group("borda_count_n4096_m16");
    group.bench_function(BenchmarkId::new("parallel", 4096), |b| {
        b.iter(|| black_box(borda_count(&features, &judge, &task, 4096, 1).unwrap()))
    });
    group.bench_function(BenchmarkId::new("sequential", 4096), |b| {
        b.iter(|| {
            parallel::sequential(|| {
                black_box(borda_count(&features, &judge, &task, 4096, 1).unwrap())
            })
        })
    });
    group.finish();
}

fn bench_stability(c: &mut Criterion) {
    let matrix = btl_matrix(7);
    let judge = MockJudge::new(matrix.clone(), 3);
    let features: Vec<FeatureRef> = matrix.names.iter().map(FeatureRef::named).collect();
    let task = RankTask::new("benchmark task", "y");
    let method = RankMethod::Pairwise { n_comparisons: 512 };

    let mut group = c.benchmark_group("stability_20_runs");
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(stability_experiment(&features, &judge, &task, method, 20, 5).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            parallel::sequential(|| {
                black_box(stability_experiment(&features, &judge, &task, method, 20, 5).unwrap())
            })
        })
    });
    group.finish();
}

fn synthetic_design(n: usize, d: usize, seed: u64) -> DesignMatrix {
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        (z ^ (z >> 31)) as f64 / u64::MAX as f64 * 2.0 - 1.0
    };
    let values = Array2::from_shape_fn((n, d), |_| next());
    let labels = (0..n)
        .map(|i| u8::from(values[[i, 0]] + 0.5 * values[[i, 1]] > 0.0))
        .collect();
    DesignMatrix {
        values,
        column_labels: (0..d).map(|j| format!("f{j}")).collect(),
        groups: (0..d)
            .map(|j| FeatureGroup {
                feature: format!("f{j}"),
                columns: j..j + 1,
            })
            .collect(),
        labels,
    }
}

fn bench_sweep(c: &mut Criterion) {
    let train = synthetic_design(2000, 12, 1);
    let test = synthetic_design(500, 12, 2);
    let ranking = Ranking::new((0..12).map(|j| format!("f{j}")).collect());

    let mut group = c.benchmark_group("eureka_sweep_k12");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(eureka_sweep(&train, &test, &ranking, 12, 0.05).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            parallel::sequential(|| {
                black_box(eureka_sweep(&train, &test, &ranking, 12, 0.05).unwrap())
            })
        })
    });
    group.finish();
}

criterion_group!(benches, bench_borda_count, bench_stability, bench_sweep);
criterion_main!(benches);
