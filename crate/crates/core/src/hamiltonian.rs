//! Ising form of the LABS objective: two- and four-body `Z` couplings.
//!
//! Expanding `sum_k C_k^2` gives a constant `N(N-1)/2` plus
//! `2 sum Z_i Z_{i+2k} + 4 sum Z_i Z_{i+t} Z_{i+k} Z_{i+k+t}`. The two-body
//! partner is `i + 2k`: it is the product pair that survives when two
//! correlation terms share a middle index, and it is what makes the diagonal
//! reproduce the objective exactly.

use serde::{Deserialize, Serialize};

use crate::brute::{par_chunks, walk_gray};
use crate::error::{Error, Result};
use crate::objective::max_energy_bound;
use crate::pauli::{PauliOperator, PauliWord, MAX_QUBITS};

/// Index tuples (1-based, strictly increasing) of the Hamiltonian's couplings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionSets {
    pub n: usize,
    pub pairs: Vec<[usize; 2]>,
    pub quads: Vec<[usize; 4]>,
}

impl InteractionSets {
    /// Every coupling as `(weight, indices)`; weight 2 for pairs and 4 for quads.
    pub fn tuples(&self) -> impl Iterator<Item = (f64, &[usize])> + '_ {
        self.pairs
            .iter()
            .map(|p| (2.0, p.as_slice()))
            .chain(self.quads.iter().map(|q| (4.0, q.as_slice())))
    }
}

pub fn build_interaction_sets(n: usize) -> Result<InteractionSets> {
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    let mut pairs = Vec::new();
    for i in 1..=n.saturating_sub(2) {
        for k in 1..=(n - i) / 2 {
            pairs.push([i, i + 2 * k]);
        }
    }
    let mut quads = Vec::new();
    for i in 1..=n.saturating_sub(3) {
        for t in 1..=(n - i - 1) / 2 {
            for k in t + 1..=n - i - t {
                quads.push([i, i + t, i + k, i + k + t]);
            }
        }
    }
    debug_assert!({
        let mut p = pairs.clone();
        p.sort_unstable();
        p.dedup();
        let mut q = quads.clone();
        q.sort_unstable();
        q.dedup();
        p.len() == pairs.len() && q.len() == quads.len()
    });
    Ok(InteractionSets { n, pairs, quads })
}

/// Closed-form `(n_two, n_four)`.
pub fn term_counts(n: usize) -> Result<(u64, u64)> {
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    let m = n as i64;
    let (two, four) = if n % 2 == 0 {
        ((m / 2) * (m / 2 - 1), m * (m / 2 - 1) * (2 * m - 5) / 12)
    } else {
        (((m - 1) / 2).pow(2), (m - 3) * (m - 1) * (2 * m - 1) / 24)
    };
    Ok((two as u64, four as u64))
}

/// `H_f` together with the constant that turns its diagonal into `E(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemHamiltonian {
    pub n: usize,
    pub operator: PauliOperator,
    pub offset: i64,
}

impl ProblemHamiltonian {
    /// `<s|H_f|s> + offset` for basis bits (`bit q-1` set means spin `q` is `-1`).
    pub fn basis_energy(&self, bits: u128) -> f64 {
        self.operator.diagonal_element(bits).re + self.offset as f64
    }
}

pub fn build_hamiltonian(n: usize) -> Result<ProblemHamiltonian> {
    if n > MAX_QUBITS {
        return Err(Error::AboveCap { n, cap: MAX_QUBITS });
    }
    let sets = build_interaction_sets(n)?;
    let mut operator = PauliOperator::zero(n);
    for (weight, idx) in sets.tuples() {
        operator.add_real(PauliWord::zs(idx), weight);
    }
    Ok(ProblemHamiltonian { n, operator, offset: (n * (n - 1) / 2) as i64 })
}

pub const SPECTRUM_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumStats {
    pub n: usize,
    pub distinct_levels: usize,
    pub min_energy: i64,
    pub max_energy: i64,
    /// Common residue of all energies mod 4, or `None` if they disagree.
    pub mod4_residue: Option<i64>,
}

pub fn spectrum_stats(n: usize) -> Result<SpectrumStats> {
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    if n > SPECTRUM_CAP {
        return Err(Error::AboveCap { n, cap: SPECTRUM_CAP });
    }
    let bound = max_energy_bound(n) as usize;
    let partials = par_chunks(n, |lo, hi| {
        let mut seen = vec![false; bound + 1];
        walk_gray(n, lo, hi, |_, p| seen[p.energy() as usize] = true);
        seen
    });
    let mut seen = vec![false; bound + 1];
    for part in partials {
        for (s, p) in seen.iter_mut().zip(part) {
            *s |= p;
        }
    }
    let levels: Vec<i64> = seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(e, _)| e as i64)
        .collect();
    let residue = levels[0].rem_euclid(4);
    let common = levels.iter().all(|e| e.rem_euclid(4) == residue);
    Ok(SpectrumStats {
        n,
        distinct_levels: levels.len(),
        min_energy: levels[0],
        max_energy: *levels.last().expect("nonempty"),
        mod4_residue: common.then_some(residue),
    })
}
