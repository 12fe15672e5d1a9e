//! Memetic tabu search and its quantum-seeded variants.

mod mts;
mod operators;
mod record;
mod tabu;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use mts::{
    mts_run, qemts_multi_run_population, qemts_seed_population, random_population, RunOutcome,
    SeedVariant,
};
pub use operators::{combine, combine_at, mutate, tournament};
pub use record::{Method, RunKey, RunRecord};
pub use tabu::{tabu_search, tabu_search_with, TabuOutcome, TabuState};

/// Counts objective evaluations, full or incremental alike.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationCounter {
    count: u64,
}

impl EvaluationCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, evaluations: u64) {
        self.count += evaluations;
    }

    #[inline]
    pub fn count(&self) -> u64 {
        self.count
    }
}

/// How tabu search scores one-flip neighbours. Both modes make identical
/// decisions and count identically; only the cost per evaluation differs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaMode {
    #[default]
    Incremental,
    FullRecompute,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub population_size: usize,
    pub p_comb: f64,
    pub p_mut: f64,
    pub tournament_size: usize,
    pub max_generations: u64,
    pub target_energy: i64,
    /// Stop once this many evaluations have been spent; `None` for no budget.
    pub max_evaluations: Option<u64>,
    #[serde(default)]
    pub delta_mode: DeltaMode,
}

impl SearchParams {
    /// `K = 100`, `p_comb = 0.9`, `p_mut = 1/N`, tournament size 2, no generation cap.
    pub fn for_length(n: usize, target_energy: i64) -> Self {
        Self {
            population_size: 100,
            p_comb: 0.9,
            p_mut: 1.0 / n as f64,
            tournament_size: 2,
            max_generations: u64::MAX,
            target_energy,
            max_evaluations: None,
            delta_mode: DeltaMode::Incremental,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidInput("population size K must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.p_comb) || !(0.0..=1.0).contains(&self.p_mut) {
            return Err(Error::InvalidInput("probabilities must lie in [0, 1]".into()));
        }
        if self.tournament_size == 0 {
            return Err(Error::InvalidInput("tournament size must be at least 1".into()));
        }
        if self.target_energy < 0 {
            return Err(Error::InvalidInput("target energy must be nonnegative".into()));
        }
        Ok(())
    }
}
