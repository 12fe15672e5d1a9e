use rand::Rng;

use super::{DeltaMode, EvaluationCounter};
use crate::objective::{energy, AutocorrelationProfile};
use crate::sequence::SpinSequence;

/// Tabu list plus the randomized iteration budget and tenure bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabuState {
    /// Iteration up to which flipping position `i` is tabu.
    pub tabu_until: Vec<u64>,
    pub budget: u64,
    pub tenure_min: u64,
    pub tenure_max: u64,
}

impl TabuState {
    /// Budget `M = U{0..N} + floor(N/2)`; tenure drawn from
    /// `[max(1, M/50), max(tenure_min, M/10)]`.
    pub fn new<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let budget = rng.random_range(0..=n as u64) + (n / 2) as u64;
        let tenure_min = (budget / 50).max(1);
        let tenure_max = (budget / 10).max(tenure_min);
        Self { tabu_until: vec![0; n], budget, tenure_min, tenure_max }
    }

    #[inline]
    pub fn is_tabu(&self, i: usize, iteration: u64) -> bool {
        self.tabu_until[i] >= iteration
    }

    /// Position with the earliest expiry, lowest index on ties.
    fn earliest_expiry(&self) -> usize {
        self.tabu_until
            .iter()
            .enumerate()
            .min_by_key(|&(i, &t)| (t, i))
            .map(|(i, _)| i)
            .expect("nonempty tabu list")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabuOutcome {
    pub best: SpinSequence,
    pub best_energy: i64,
    pub iterations: u64,
    pub reached_target: bool,
}

/// Runs the full randomized budget and returns the best sequence seen.
pub fn tabu_search<R: Rng + ?Sized>(
    start: &SpinSequence,
    rng: &mut R,
    counter: &mut EvaluationCounter,
) -> SpinSequence {
    tabu_search_with(start, None, DeltaMode::Incremental, rng, counter).best
}

/// Tabu search over one-flip moves.
///
/// Each iteration scores all `N` neighbours (`N` evaluations; the start costs
/// one more), takes the lowest-energy admissible flip (lowest index on ties)
/// and marks it tabu for a random tenure. A tabu flip is admissible when it
/// would strictly beat the best energy seen. If nothing is admissible the
/// earliest-expiring flip is taken. With `target = Some(e)` the search
/// returns as soon as the best energy drops to `e` or below.
pub fn tabu_search_with<R: Rng + ?Sized>(
    start: &SpinSequence,
    target: Option<i64>,
    mode: DeltaMode,
    rng: &mut R,
    counter: &mut EvaluationCounter,
) -> TabuOutcome {
    let n = start.len();
    let mut current = start.clone();
    let mut profile = AutocorrelationProfile::new(&current);
    counter.add(1);
    let mut best = current.clone();
    let mut best_energy = profile.energy();
    let hit = |e: i64| target.is_some_and(|t| e <= t);
    if hit(best_energy) {
        return TabuOutcome { best, best_energy, iterations: 0, reached_target: true };
    }

    let mut state = TabuState::new(n, rng);
    let mut iterations = 0;
    for t in 1..=state.budget {
        iterations = t;
        counter.add(n as u64);
        let current_energy = profile.energy();
        let mut chosen: Option<(usize, i64)> = None;
        for i in 0..n {
            let e = match mode {
                DeltaMode::Incremental => current_energy + profile.delta(current.spins(), i),
                DeltaMode::FullRecompute => {
                    current.flip(i);
                    let e = energy(&current);
                    current.flip(i);
                    e
                }
            };
            let admissible = !state.is_tabu(i, t) || e < best_energy;
            if admissible && chosen.is_none_or(|(_, ce)| e < ce) {
                chosen = Some((i, e));
            }
        }
        let flip = chosen.map_or_else(|| state.earliest_expiry(), |(i, _)| i);
        profile.apply_flip(&mut current, flip);
        state.tabu_until[flip] = t + rng.random_range(state.tenure_min..=state.tenure_max);
        if profile.energy() < best_energy {
            best_energy = profile.energy();
            best = current.clone();
            if hit(best_energy) {
                return TabuOutcome { best, best_energy, iterations, reached_target: true };
            }
        }
    }
    TabuOutcome { best, best_energy, iterations, reached_target: false }
}
