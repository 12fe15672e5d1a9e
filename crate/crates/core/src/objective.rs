//! The LABS objective `E(s) = sum_k C_k^2` with `C_k = sum_i s_i s_{i+k}`.
//!
//! All arithmetic is exact 64-bit integer arithmetic. [`AutocorrelationProfile`]
//! caches the `C_k` so single-flip energy changes cost O(N).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::SpinSequence;

/// Autocorrelations `c[k-1] = C_k` for `k = 1..N-1` and their energy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutocorrelationProfile {
    c: Vec<i64>,
    energy: i64,
}

impl AutocorrelationProfile {
    pub fn new(seq: &SpinSequence) -> Self {
        let c = correlations(seq.spins());
        let energy = c.iter().map(|x| x * x).sum();
        Self { c, energy }
    }

    #[inline]
    pub fn energy(&self) -> i64 {
        self.energy
    }

    #[inline]
    pub fn correlations(&self) -> &[i64] {
        &self.c
    }

    /// Energy change from flipping spin `i` (0-based), without mutating anything.
    #[inline]
    pub fn delta(&self, spins: &[i8], i: usize) -> i64 {
        let n = spins.len();
        let si = i64::from(spins[i]);
        let mut delta = 0i64;
        for k in 1..n {
            let mut d = 0i64;
            if i + k < n {
                d += i64::from(spins[i + k]);
            }
            if i >= k {
                d += i64::from(spins[i - k]);
            }
            if d != 0 {
                let change = -2 * si * d;
                delta += change * (2 * self.c[k - 1] + change);
            }
        }
        delta
    }

    /// Flips spin `i` of `seq` and updates the cached correlations. Returns the energy change.
    pub fn apply_flip(&mut self, seq: &mut SpinSequence, i: usize) -> i64 {
        let spins = seq.spins();
        let n = spins.len();
        let si = i64::from(spins[i]);
        let mut delta = 0i64;
        for k in 1..n {
            let mut d = 0i64;
            if i + k < n {
                d += i64::from(spins[i + k]);
            }
            if i >= k {
                d += i64::from(spins[i - k]);
            }
            if d != 0 {
                let change = -2 * si * d;
                delta += change * (2 * self.c[k - 1] + change);
                self.c[k - 1] += change;
            }
        }
        self.energy += delta;
        seq.flip(i);
        debug_assert_eq!(self.c, correlations(seq.spins()), "profile out of sync");
        delta
    }

    fn is_consistent(&self, seq: &SpinSequence) -> bool {
        self.c == correlations(seq.spins())
    }
}

fn correlations(spins: &[i8]) -> Vec<i64> {
    let n = spins.len();
    (1..n)
        .map(|k| {
            spins[..n - k]
                .iter()
                .zip(&spins[k..])
                .map(|(&a, &b)| i64::from(a * b))
                .sum()
        })
        .collect()
}

pub fn energy(seq: &SpinSequence) -> i64 {
    correlations(seq.spins()).iter().map(|c| c * c).sum()
}

pub fn autocorrelations(seq: &SpinSequence) -> AutocorrelationProfile {
    AutocorrelationProfile::new(seq)
}

/// Pure single-flip update: returns the energy change and the profile of the
/// flipped sequence. `i` is 1-based.
///
/// Debug builds verify that `profile` matches `seq` by recomputation.
pub fn flip_delta(
    seq: &SpinSequence,
    profile: &AutocorrelationProfile,
    i: usize,
) -> Result<(i64, AutocorrelationProfile)> {
    if i == 0 || i > seq.len() {
        return Err(Error::IndexOutOfRange { index: i, len: seq.len() });
    }
    if cfg!(debug_assertions) && !profile.is_consistent(seq) {
        return Err(Error::InvalidInput("stale autocorrelation profile".into()));
    }
    let mut scratch = seq.clone();
    let mut updated = profile.clone();
    let delta = updated.apply_flip(&mut scratch, i - 1);
    Ok((delta, updated))
}

/// Expected energy over uniform random sequences, `N(N-1)/2`.
pub fn uniform_mean_energy(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    Ok((n * (n - 1)) as f64 / 2.0)
}

/// Upper bound `N(N-1)(2N-1)/6`, attained by the all-ones sequence.
pub fn max_energy_bound(n: usize) -> i64 {
    let n = n as i64;
    n * (n - 1) * (2 * n - 1) / 6
}
