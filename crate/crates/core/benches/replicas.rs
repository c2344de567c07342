//! Sequential versus rayon scheduling of replica loops.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hyperplane::combinatorics::LambdaParams;
use hyperplane::continuum::{martingale_check, PvConfig};
use hyperplane::exec::{try_map_replicas, Execution};
use hyperplane::harness::hull_samples;
use hyperplane::mapbuild::build_pshit_ball;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn martingale(c: &mut Criterion) {
    let mut g = c.benchmark_group("martingale_paths");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, 256), |b| {
            b.iter(|| black_box(martingale_check(1.0, 256, 1e-2, 7, exec)))
        });
    }
    g.finish();
}

fn hulls(c: &mut Criterion) {
    let cfg = PvConfig::default();
    let mut g = c.benchmark_group("hull_paths");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, 64), |b| {
            b.iter(|| black_box(hull_samples(2.0, &cfg, 64, 7, exec).unwrap()))
        });
    }
    g.finish();
}

fn maps(c: &mut Criterion) {
    let params = LambdaParams::from_ratio(0.9).unwrap();
    let mut g = c.benchmark_group("map_builds");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, 16), |b| {
            b.iter(|| {
                black_box(try_map_replicas(16, exec, |k| build_pshit_ball(params, 4, 7, k as u64).map(|(m, _)| m.n_vertices)).unwrap())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, martingale, hulls, maps);
criterion_main!(benches);
