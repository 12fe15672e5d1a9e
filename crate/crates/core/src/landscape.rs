//! Exhaustive single-flip local-minimum density for LABS and SK landscapes.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::brute::{gray, par_chunks, sequence_from_code, walk_gray};
use crate::error::{Error, Result};
use crate::rng;
use crate::sequence::SpinSequence;

pub const LANDSCAPE_CAP: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Labs,
    Sk,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Labs => "labs",
            Model::Sk => "sk",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "labs" => Ok(Model::Labs),
            "sk" => Ok(Model::Sk),
            other => Err(Error::InvalidInput(format!("unknown model '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandscapeStats {
    pub n: usize,
    pub model: Model,
    /// Instance index within the report (SK only).
    pub instance: Option<usize>,
    pub instance_seed: Option<u64>,
    pub f_lo: f64,
    pub minima_count: u64,
}

impl LandscapeStats {
    fn new(n: usize, model: Model, instance: Option<(usize, u64)>, minima_count: u64) -> Self {
        Self {
            n,
            model,
            instance: instance.map(|(i, _)| i),
            instance_seed: instance.map(|(_, s)| s),
            f_lo: minima_count as f64 / (1u64 << n) as f64,
            minima_count,
        }
    }
}

/// Sherrington–Kirkpatrick couplings, symmetric with zero diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SKInstance {
    pub n: usize,
    /// Row-major `n × n`.
    pub couplings: Vec<f64>,
    pub seed: Option<u64>,
}

impl SKInstance {
    /// `J_ij ~ Normal(0, 1/N)` (variance `1/N`) for `i < j`, mirrored.
    pub fn generate(n: usize, seed: u64) -> Result<Self> {
        let mut rng = rng::stream(seed, &[]);
        let normal = Normal::new(0.0, 1.0 / (n as f64).sqrt())
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        let mut inst = Self::zero(n)?;
        for i in 0..n {
            for j in i + 1..n {
                let v = normal.sample(&mut rng);
                inst.couplings[i * n + j] = v;
                inst.couplings[j * n + i] = v;
            }
        }
        inst.seed = Some(seed);
        Ok(inst)
    }

    pub fn zero(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooShort(n));
        }
        Ok(Self { n, couplings: vec![0.0; n * n], seed: None })
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.couplings[i * self.n + j] = value;
        self.couplings[j * self.n + i] = value;
    }

    #[inline]
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.couplings[i * self.n + j]
    }

    /// `h_i = Σ_j J_ij s_j`.
    pub fn local_fields(&self, spins: &[i8]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.coupling(i, j) * spins[j] as f64).sum())
            .collect()
    }
}

/// `Σ_{i<j} J_ij s_i s_j`.
pub fn sk_energy(instance: &SKInstance, seq: &SpinSequence) -> Result<f64> {
    if seq.len() != instance.n {
        return Err(Error::LengthMismatch(instance.n, seq.len()));
    }
    let s = seq.spins();
    let mut e = 0.0;
    for i in 0..instance.n {
        for j in i + 1..instance.n {
            e += instance.coupling(i, j) * (s[i] * s[j]) as f64;
        }
    }
    Ok(e)
}

/// Energy change from flipping spin `i`: `-2 s_i h_i`.
#[inline]
pub fn sk_flip_delta(spins: &[i8], fields: &[f64], i: usize) -> f64 {
    -2.0 * spins[i] as f64 * fields[i]
}

fn check_cap(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    if n > LANDSCAPE_CAP {
        return Err(Error::AboveCap { n, cap: LANDSCAPE_CAP });
    }
    Ok(())
}

/// Counts states with `E(s) <= E(s with spin i flipped)` for every `i`,
/// re-evaluating `energy_fn` from scratch for each neighbour. Works for any
/// objective; slow, intended as a reference.
pub fn local_minima_count<T, F>(n: usize, energy_fn: F) -> Result<u64>
where
    T: PartialOrd,
    F: Fn(&SpinSequence) -> T + Sync,
{
    check_cap(n)?;
    let counts = par_chunks(n, |lo, hi| {
        let mut count = 0u64;
        for rank in lo..hi {
            let mut s = sequence_from_code(gray(rank), n);
            let e = energy_fn(&s);
            let is_min = (0..n).all(|i| {
                s.flip(i);
                let ok = e <= energy_fn(&s);
                s.flip(i);
                ok
            });
            count += is_min as u64;
        }
        count
    });
    Ok(counts.into_iter().sum())
}

/// LABS local-minimum density using exact integer flip deltas.
pub fn labs_landscape(n: usize) -> Result<LandscapeStats> {
    check_cap(n)?;
    let counts = par_chunks(n, |lo, hi| {
        let mut count = 0u64;
        walk_gray(n, lo, hi, |seq, profile| {
            let spins = seq.spins();
            count += (0..n).all(|i| profile.delta(spins, i) >= 0) as u64;
        });
        count
    });
    Ok(LandscapeStats::new(n, Model::Labs, None, counts.into_iter().sum()))
}

/// SK local-minimum count, walking Gray order with cached local fields.
pub fn sk_minima_count(instance: &SKInstance) -> Result<u64> {
    let n = instance.n;
    check_cap(n)?;
    let counts = par_chunks(n, |lo, hi| {
        let mut seq = sequence_from_code(gray(lo), n);
        let mut spins = seq.spins().to_vec();
        let mut fields = instance.local_fields(&spins);
        let mut count = 0u64;
        for rank in lo..hi {
            if rank > lo {
                let k = rank.trailing_zeros() as usize;
                seq.flip(k);
                spins[k] = -spins[k];
                let step = 2.0 * spins[k] as f64;
                for (i, h) in fields.iter_mut().enumerate() {
                    *h += instance.coupling(i, k) * step;
                }
            }
            count += (0..n).all(|i| sk_flip_delta(&spins, &fields, i) >= 0.0) as u64;
        }
        count
    });
    Ok(counts.into_iter().sum())
}

pub fn sk_landscape(instance: &SKInstance, index: usize) -> Result<LandscapeStats> {
    let count = sk_minima_count(instance)?;
    let seed = instance.seed.unwrap_or(0);
    Ok(LandscapeStats::new(instance.n, Model::Sk, Some((index, seed)), count))
}

/// Seed of SK instance `index` at length `n` under `master`.
pub fn sk_instance_seed(master: u64, n: usize, index: usize) -> u64 {
    rng::derive_seed(master, &[rng::label("sk"), n as u64, index as u64])
}

/// One LABS row plus `sk_instances` SK rows per length, in input order.
pub fn landscape_report(
    n_values: &[usize],
    sk_instances: usize,
    master_seed: u64,
) -> Result<Vec<LandscapeStats>> {
    for &n in n_values {
        check_cap(n)?;
    }
    let mut rows = Vec::with_capacity(n_values.len() * (1 + sk_instances));
    for &n in n_values {
        rows.push(labs_landscape(n)?);
        for i in 0..sk_instances {
            let inst = SKInstance::generate(n, sk_instance_seed(master_seed, n, i))?;
            rows.push(sk_landscape(&inst, i)?);
        }
    }
    Ok(rows)
}

/// Median SK density among the rows for length `n`.
pub fn median_sk_f_lo(rows: &[LandscapeStats], n: usize) -> Option<f64> {
    let mut v: Vec<f64> =
        rows.iter().filter(|r| r.n == n && r.model == Model::Sk).map(|r| r.f_lo).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

/// Random spins, for tests and benches.
pub fn random_spins<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SpinSequence> {
    SpinSequence::new((0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::energy;
    use proptest::prelude::*;

    #[test]
    fn small_labs_densities() {
        assert_eq!(labs_landscape(2).unwrap().f_lo, 1.0);
        let three = labs_landscape(3).unwrap();
        assert_eq!(three.f_lo, 0.5);
        assert_eq!(three.minima_count, 4);
    }

    #[test]
    fn labs_fast_path_matches_reference() {
        for n in 2..=12 {
            let fast = labs_landscape(n).unwrap();
            assert_eq!(fast.minima_count, local_minima_count(n, energy).unwrap(), "n={n}");
            assert!(fast.f_lo > 0.0 && fast.f_lo <= 1.0);
        }
    }

    #[test]
    fn sk_fast_path_matches_reference() {
        for n in [4usize, 7, 10, 13, 15] {
            let inst = SKInstance::generate(n, 42 + n as u64).unwrap();
            let reference = local_minima_count(n, |s| sk_energy(&inst, s).unwrap()).unwrap();
            assert_eq!(sk_minima_count(&inst).unwrap(), reference, "n={n}");
        }
    }

    #[test]
    fn zero_couplings() {
        let inst = SKInstance::zero(6).unwrap();
        assert_eq!(sk_landscape(&inst, 0).unwrap().f_lo, 1.0);
        assert_eq!(sk_energy(&inst, &SpinSequence::all_up(6).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn single_coupling_energy() {
        let mut inst = SKInstance::zero(3).unwrap();
        inst.set(0, 1, 0.7);
        assert_eq!(sk_energy(&inst, &"+++".parse().unwrap()).unwrap(), 0.7);
        assert_eq!(sk_energy(&inst, &"+-+".parse().unwrap()).unwrap(), -0.7);
        assert!(sk_energy(&inst, &"++".parse().unwrap()).is_err());
    }

    #[test]
    fn instances_are_symmetric_and_scaled() {
        let n = 200;
        let inst = SKInstance::generate(n, 3).unwrap();
        let mut sum_sq = 0.0;
        for i in 0..n {
            assert_eq!(inst.coupling(i, i), 0.0);
            for j in 0..n {
                assert_eq!(inst.coupling(i, j), inst.coupling(j, i));
                if i < j {
                    sum_sq += inst.coupling(i, j).powi(2);
                }
            }
        }
        let var = sum_sq / (n * (n - 1) / 2) as f64;
        assert!((var * n as f64 - 1.0).abs() < 0.05, "variance {var}");
        assert_eq!(SKInstance::generate(n, 3).unwrap(), inst);
    }

    #[test]
    fn report_shape_and_determinism() {
        let rows = landscape_report(&[5, 6], 3, 11).unwrap();
        assert_eq!(rows.len(), 2 * 4);
        assert_eq!(rows, landscape_report(&[5, 6], 3, 11).unwrap());
        assert!(landscape_report(&[LANDSCAPE_CAP + 1], 1, 0).is_err());
    }

    proptest! {
        #[test]
        fn sk_delta_matches_recompute(seed in any::<u64>(), n in 2usize..20, i in 0usize..20) {
            let i = i % n;
            let inst = SKInstance::generate(n, seed).unwrap();
            let mut rng = rng::stream(seed, &[1]);
            let s = random_spins(n, &mut rng).unwrap();
            let fields = inst.local_fields(s.spins());
            let delta = sk_flip_delta(s.spins(), &fields, i);
            let direct = sk_energy(&inst, &s.flipped(i).unwrap()).unwrap() - sk_energy(&inst, &s).unwrap();
            prop_assert!((delta - direct).abs() < 1e-9);
        }
    }
}
