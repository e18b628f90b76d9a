//! Sequential versus parallel execution of the batch loops: seed ensembles,
//! per-step candidate scoring and per-split sweep correlations.

use std::hint::black_box;

use auclab_core::analysis::fixtures::PlantedSweep;
use auclab_core::analysis::sweep_correlations;
use auclab_core::optimizer::{run, run_seeds, OptimizerConfig, Procedure};
use auclab_core::synthgen::{DatasetSpec, GroupSpec};
use auclab_core::{Execution, Metric};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn seed_ensemble(c: &mut Criterion) {
    let dataset = DatasetSpec::Groups(GroupSpec::two_group_disparity(200, 0.85));
    let cfg = OptimizerConfig::new(Procedure::FixMistakes, Metric::Auprc, 50);
    let seeds: Vec<u64> = (0..20).collect();
    let mut group = c.benchmark_group("fix_mistakes_20_seeds");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_seeds(black_box(&dataset), &cfg, &seeds, exec).unwrap())
        });
    }
    group.finish();
}

fn candidate_scoring(c: &mut Criterion) {
    let dataset = DatasetSpec::Groups(GroupSpec::two_group_disparity(200, 0.85));
    let set = dataset.generate(&mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    let mut group = c.benchmark_group("noise_100_candidates");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mut cfg = OptimizerConfig::new(
            Procedure::Noise { delta_max: 0.05, candidates: 100 },
            Metric::Auprc,
            10,
        );
        cfg.execution = exec;
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run(black_box(&set), &cfg, &mut ChaCha8Rng::seed_from_u64(1)).unwrap())
        });
    }
    group.finish();
}

fn sweep_splits(c: &mut Criterion) {
    let records = PlantedSweep::default().generate(&mut ChaCha8Rng::seed_from_u64(2));
    let mut group = c.benchmark_group("sweep_20_splits");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep_correlations(black_box(&records), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, seed_ensemble, candidate_scoring, sweep_splits);
criterion_main!(benches);
