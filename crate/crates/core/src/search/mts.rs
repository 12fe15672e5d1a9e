use rand::Rng;

use super::operators::{combine, mutate, tournament};
use super::tabu::tabu_search_with;
use super::{EvaluationCounter, SearchParams};
use crate::error::{Error, Result};
use crate::objective::energy;
use crate::sequence::SpinSequence;
use crate::sim::ShotSet;

/// Result of one MTS run, before run metadata is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub best: SpinSequence,
    pub best_energy: i64,
    pub found_optimum: bool,
    /// Counter value when the incumbent first reached the target.
    pub evals_to_solution: Option<u64>,
    pub evaluations: u64,
    pub generations: u64,
}

/// Memetic tabu search from a given population of exactly `K` sequences.
///
/// Scoring the initial population counts one evaluation per individual and
/// stops early if the target is already present. Each generation builds one
/// child (crossover of two tournament winners with probability `p_comb`,
/// otherwise a copy of a random individual), mutates it, improves it with
/// tabu search, and writes it over a uniformly random slot.
pub fn mts_run<R: Rng + ?Sized>(
    params: &SearchParams,
    initial_population: Vec<SpinSequence>,
    rng: &mut R,
) -> Result<RunOutcome> {
    params.validate()?;
    if initial_population.len() != params.population_size {
        return Err(Error::InvalidInput(format!(
            "population has {} individuals, expected K = {}",
            initial_population.len(),
            params.population_size
        )));
    }
    let n = initial_population[0].len();
    if let Some(bad) = initial_population.iter().find(|s| s.len() != n) {
        return Err(Error::LengthMismatch(n, bad.len()));
    }

    let target = params.target_energy;
    let budget = params.max_evaluations.unwrap_or(u64::MAX);
    let mut counter = EvaluationCounter::new();
    let mut population = initial_population;
    let mut energies = Vec::with_capacity(population.len());
    let mut best_idx = 0;
    for (i, s) in population.iter().enumerate() {
        counter.add(1);
        let e = energy(s);
        energies.push(e);
        if e < energies[best_idx] {
            best_idx = i;
        }
        if e <= target {
            return Ok(RunOutcome {
                best: s.clone(),
                best_energy: e,
                found_optimum: true,
                evals_to_solution: Some(counter.count()),
                evaluations: counter.count(),
                generations: 0,
            });
        }
    }
    let mut best = population[best_idx].clone();
    let mut best_energy = energies[best_idx];

    let k = population.len();
    let mut generations = 0;
    while generations < params.max_generations && counter.count() < budget {
        let mut child = if rng.random::<f64>() < params.p_comb {
            let a = tournament(&energies, params.tournament_size, rng);
            let b = tournament(&energies, params.tournament_size, rng);
            combine(&population[a], &population[b], rng)?
        } else {
            population[rng.random_range(0..k)].clone()
        };
        mutate(&mut child, params.p_mut, rng);
        let improved = tabu_search_with(&child, Some(target), params.delta_mode, rng, &mut counter);
        generations += 1;
        if improved.best_energy < best_energy {
            best_energy = improved.best_energy;
            best = improved.best.clone();
        }
        let slot = rng.random_range(0..k);
        population[slot] = improved.best;
        energies[slot] = improved.best_energy;
        if best_energy <= target {
            return Ok(RunOutcome {
                best,
                best_energy,
                found_optimum: true,
                evals_to_solution: Some(counter.count()),
                evaluations: counter.count(),
                generations,
            });
        }
    }
    Ok(RunOutcome {
        best,
        best_energy,
        found_optimum: false,
        evals_to_solution: None,
        evaluations: counter.count(),
        generations,
    })
}

/// `k` independent uniform sequences of length `n`.
pub fn random_population<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Vec<SpinSequence>> {
    (0..k)
        .map(|_| SpinSequence::new((0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedVariant {
    SingleBestReplicated,
    MultiRunBest,
}

/// Lowest-energy shot (first on ties) replicated `k` times.
pub fn qemts_seed_population(shots: &ShotSet, k: usize) -> Result<Vec<SpinSequence>> {
    let best = shots.best()?;
    Ok(vec![best; k])
}

/// Best shot of each run, cycled through to fill `k` slots.
pub fn qemts_multi_run_population(runs: &[ShotSet], k: usize) -> Result<Vec<SpinSequence>> {
    if runs.is_empty() {
        return Err(Error::Empty("shot sets"));
    }
    let bests = runs.iter().map(ShotSet::best).collect::<Result<Vec<_>>>()?;
    Ok((0..k).map(|i| bests[i % bests.len()].clone()).collect())
}
