//! Compares sequential and rayon-parallel execution of the randomized
//! sweeps. Requires the `parallel` feature (on by default):
//!
//! ```text
//! cargo bench -p inet-core
//! ```

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use inet_core::engine::PolicyConfig;
use inet_core::oracle;
use inet_core::sweep::{self, ExecMode};

fn bench_oracle_agreement(c: &mut Criterion) {
    let nets = oracle::random_diagrams(oracle::seed_from_env(), 60, 8);
    let policies = PolicyConfig::all_direct();
    let mut group = c.benchmark_group("oracle_agreement");
    for mode in [ExecMode::Sequential, ExecMode::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{mode:?}")),
            &mode,
            |b, &mode| {
                b.iter(|| {
                    let report = sweep::oracle_agreement(&nets, &policies, mode);
                    assert!(report.is_clean());
                    report.checks
                })
            },
        );
    }
    group.finish();
}

fn bench_walk_equivalence(c: &mut Criterion) {
    let nets = oracle::random_diagrams(oracle::seed_from_env() ^ 0x5eed, 120, 8);
    let cfg = PolicyConfig::default();
    let mut group = c.benchmark_group("walk_equivalence");
    for mode in [ExecMode::Sequential, ExecMode::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{mode:?}")),
            &mode,
            |b, &mode| {
                b.iter(|| {
                    let report = sweep::walk_equivalence(&nets, &cfg, mode);
                    assert!(report.is_clean());
                    report.checks
                })
            },
        );
    }
    group.finish();
}

fn bench_correspondence(c: &mut Criterion) {
    let nets = oracle::random_diagrams(oracle::seed_from_env() ^ 0xb16, 120, 7);
    let mut group = c.benchmark_group("correspondence");
    for mode in [ExecMode::Sequential, ExecMode::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{mode:?}")),
            &mode,
            |b, &mode| {
                b.iter(|| {
                    let report = sweep::correspondence(&nets, mode);
                    assert!(report.is_clean());
                    report.checks
                })
            },
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_oracle_agreement,
    bench_walk_equivalence,
    bench_correspondence
);
criterion_main!(benches);
