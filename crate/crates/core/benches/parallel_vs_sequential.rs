use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use landscape_paths::experiments::{estimate_p, McConfig};
use landscape_paths::landscape::{generate_with, GenOptions};
use landscape_paths::pathcount::count_accessible_with;
use landscape_paths::{ExecMode, ModelSpec};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    group.sample_size(10);
    for n in [16u32, 20] {
        for (name, mode) in MODES {
            let opts = GenOptions {
                mode,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| generate_with(ModelSpec::Hoc, n, black_box(1), opts).unwrap())
            });
        }
    }
    group.finish();
}

fn counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_accessible");
    group.sample_size(10);
    for n in [16u32, 20] {
        let land = generate_with(ModelSpec::CHOC, n, 3, GenOptions::default()).unwrap();
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &land, |b, land| {
                b.iter(|| count_accessible_with(black_box(land), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn replicates(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate_p");
    group.sample_size(10);
    let n = 12;
    for (name, mode) in MODES {
        let cfg = McConfig::new(200, 9).with_mode(mode);
        group.bench_function(BenchmarkId::new(name, n), |b| {
            b.iter(|| estimate_p(ModelSpec::CHOC, n, black_box(&cfg)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, generation, counting, replicates);
criterion_main!(benches);
