use labs_core::rng;
use labs_core::search::Method;
use labs_core::stats::{
    loglinear_fit, two_stage_bootstrap, CensoringPolicy, ResampleMode, SyntheticSpec, TTSDataset, TtsGrid,
};
use rand_distr::{Distribution, Normal};

#[test]
fn fit_recovers_kappa_under_lognormal_noise() {
    let noise = Normal::new(0.0, 0.2).unwrap();
    let mut hits = 0;
    for trial in 0..1000 {
        let mut g = rng::stream(2024, &[trial]);
        let pts: Vec<(f64, f64)> = (10..=24)
            .map(|n| (n as f64, 1.3f64.powi(n) * Distribution::<f64>::sample(&noise, &mut g).exp()))
            .collect();
        let k = loglinear_fit(&pts).unwrap().kappa;
        hits += (1.25..=1.35).contains(&k) as usize;
    }
    assert!(hits >= 950, "{hits}/1000 within [1.25, 1.35]");
}

#[test]
fn bootstrap_ci_covers_true_kappa() {
    let spec = SyntheticSpec::default();
    let mut covered = 0;
    for trial in 0..100u64 {
        let ds = TTSDataset::from_records(spec.generate(trial)).unwrap();
        let grid = TtsGrid::build(&ds, CensoringPolicy::default());
        let res = two_stage_bootstrap(&grid, 5000, &[0.5], None, ResampleMode::Random { seed: 1000 + trial }).unwrap();
        covered += res[0].kappa.contains(spec.kappa) as usize;
    }
    assert!(covered >= 90, "coverage {covered}/100");
}

#[test]
fn bootstrap_independent_of_thread_count() {
    let ds = TTSDataset::from_records(SyntheticSpec::default().generate(7)).unwrap();
    let grid = TtsGrid::build(&ds, CensoringPolicy::default());
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| two_stage_bootstrap(&grid, 500, &[0.1, 0.5], None, ResampleMode::Random { seed: 5 }).unwrap())
    };
    assert_eq!(run(1), run(6));
}

#[test]
fn ci_endpoints_stabilize() {
    let ds = TTSDataset::from_records(SyntheticSpec::default().generate(11)).unwrap();
    let grid = TtsGrid::build(&ds, CensoringPolicy::default());
    let a = &two_stage_bootstrap(&grid, 5000, &[0.5], None, ResampleMode::Random { seed: 1 }).unwrap()[0];
    let b = &two_stage_bootstrap(&grid, 5000, &[0.5], None, ResampleMode::Random { seed: 2 }).unwrap()[0];
    for (x, y) in [(a.kappa.lower, b.kappa.lower), (a.kappa.upper, b.kappa.upper)] {
        assert!((x - y).abs() / x < 0.01, "{x} vs {y}");
    }
    assert_eq!(a.method, Method::Mts);
}
