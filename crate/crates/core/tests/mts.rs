use labs_core::brute::brute_force_optimum;
use labs_core::rng;
use labs_core::search::{mts_run, random_population, DeltaMode, SearchParams};

#[test]
fn mts_always_reaches_brute_force_optimum() {
    for n in 5..=20 {
        let target = brute_force_optimum(n).unwrap().optimal_energy;
        let mut worst = 0;
        for seed in 0..100u64 {
            let params = SearchParams { max_evaluations: Some(10_000_000), ..SearchParams::for_length(n, target) };
            let mut g = rng::stream(seed, &[n as u64]);
            let pop = random_population(n, params.population_size, &mut g).unwrap();
            let out = mts_run(&params, pop, &mut g).unwrap();
            assert!(out.found_optimum, "N = {n}, seed {seed}");
            assert_eq!(out.best_energy, target);
            worst = worst.max(out.evals_to_solution.unwrap());
        }
        assert!(worst <= 10_000_000);
    }
}

#[test]
fn evals_to_solution_is_reproducible_and_mode_independent() {
    let n = 17;
    let target = brute_force_optimum(n).unwrap().optimal_energy;
    for seed in 0..5u64 {
        let run = |mode| {
            let params = SearchParams { delta_mode: mode, ..SearchParams::for_length(n, target) };
            let mut g = rng::stream(seed, &[1]);
            let pop = random_population(n, 100, &mut g).unwrap();
            mts_run(&params, pop, &mut g).unwrap()
        };
        let a = run(DeltaMode::Incremental);
        assert_eq!(a, run(DeltaMode::Incremental));
        assert_eq!(a.evals_to_solution, run(DeltaMode::FullRecompute).evals_to_solution);
    }
}
