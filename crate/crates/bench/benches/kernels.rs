use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use labs_core::cd::{FieldConfig, Schedule};
use labs_core::objective::{autocorrelations, energy};
use labs_core::rng;
use labs_core::search::{random_population, tabu_search, EvaluationCounter};
use labs_core::sim::{build_circuit, simulate};
use labs_core::stats::{two_stage_bootstrap, CensoringPolicy, ResampleMode, SyntheticSpec, TTSDataset, TtsGrid};

fn objective(c: &mut Criterion) {
    let mut group = c.benchmark_group("objective");
    for n in [32usize, 64, 128] {
        let seq = random_population(n, 1, &mut rng::stream(1, &[n as u64])).unwrap().remove(0);
        group.bench_with_input(BenchmarkId::new("energy", n), &seq, |b, s| b.iter(|| energy(black_box(s))));
        let profile = autocorrelations(&seq);
        group.bench_with_input(BenchmarkId::new("all_flip_deltas", n), &seq, |b, s| {
            b.iter(|| (0..n).map(|i| profile.delta(s.spins(), i)).min())
        });
    }
    group.finish();
}

fn tabu(c: &mut Criterion) {
    let mut group = c.benchmark_group("tabu");
    for n in [20usize, 40] {
        let start = random_population(n, 1, &mut rng::stream(2, &[n as u64])).unwrap().remove(0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &start, |b, s| {
            let mut g = rng::stream(3, &[n as u64]);
            b.iter(|| tabu_search(s, &mut g, &mut EvaluationCounter::new()))
        });
    }
    group.finish();
}

fn statevector(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for n in [10usize, 14] {
        let plan = build_circuit(n, &Schedule::default(), 10, &FieldConfig::uniform(n)).unwrap();
        group.bench_with_input(BenchmarkId::new("n_trot_10", n), &plan, |b, p| b.iter(|| simulate(p).unwrap()));
    }
    group.finish();
}

fn bootstrap(c: &mut Criterion) {
    let ds = TTSDataset::from_records(SyntheticSpec::default().generate(1)).unwrap();
    let grid = TtsGrid::build(&ds, CensoringPolicy::default());
    let mut group = c.benchmark_group("bootstrap");
    group.sample_size(10);
    group.bench_function("two_stage_b500", |b| {
        b.iter(|| two_stage_bootstrap(&grid, 500, &[0.5], None, ResampleMode::Random { seed: 7 }).unwrap())
    });
    group.finish();
}

criterion_group!(benches, objective, tabu, statevector, bootstrap);
criterion_main!(benches);
