use std::hint::black_box;

use beta_arena::complex::scan_regions;
use beta_arena::lattice::{LatticeDomain, LatticeSystem};
use beta_arena::numeric::metallic_mean;
use beta_arena::quaternion::{find_witness, LatticePreset};
use beta_arena::scenarios::{run_batch, sample_losing, sample_real_winning, AliceKind, BobKind};
use beta_arena::{Execution, Quaternion, Tolerance};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn region_scan(c: &mut Criterion) {
    let rs: Vec<f64> = (0..400).map(|i| 1.05 + 0.03 * i as f64).collect();
    let thetas: Vec<f64> = (0..100).map(|j| 0.0078 * j as f64).collect();
    let mut g = c.benchmark_group("region_scan");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(scan_regions(&rs, &thetas, exec))));
    }
    g.finish();
}

fn game_batch(c: &mut Criterion) {
    let bases = [metallic_mean(1).unwrap(), metallic_mean(2).unwrap(), 3.0];
    let mut setups = sample_real_winning(48, &bases, BobKind::Random, 1);
    setups.extend(sample_losing(16, &LatticePreset::Lipschitz, AliceKind::Random, 2));
    let mut g = c.benchmark_group("game_batch");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| black_box(run_batch(&setups, 7, exec))));
    }
    g.finish();
}

fn witness_search(c: &mut Criterion) {
    let q = Quaternion::new(1.0, metallic_mean(1).unwrap(), 1.0, 0.0);
    let sys = LatticeSystem::new(q, LatticeDomain::lipschitz(0.0), Tolerance::default()).unwrap();
    // Never realised, so every sample is tried.
    let block = [Quaternion::real(50.0), Quaternion::ZERO];
    let mut g = c.benchmark_group("witness_search");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(find_witness(&sys, &block, 1 << 16, 3, exec)))
        });
    }
    g.finish();
}

criterion_group!(benches, region_scan, game_batch, witness_search);
criterion_main!(benches);
