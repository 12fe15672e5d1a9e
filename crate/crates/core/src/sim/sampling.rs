use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::statevector::StateVector;
use super::SIM_CAP;
use crate::brute::{gray, par_chunks, walk_gray};
use crate::error::{Error, Result};
use crate::objective::energy;
use crate::sequence::SpinSequence;

/// LABS energy of every basis index (qubit 1 = most significant bit).
pub fn basis_energies(n: usize) -> Result<Vec<i64>> {
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    if n > SIM_CAP {
        return Err(Error::AboveCap { n, cap: SIM_CAP });
    }
    let chunks = par_chunks(n, |lo, hi| {
        let mut out = Vec::with_capacity((hi - lo) as usize);
        walk_gray(n, lo, hi, |_, p| out.push(p.energy()));
        (lo, out)
    });
    let mut energies = vec![0i64; 1 << n];
    for (lo, part) in chunks {
        for (offset, e) in part.into_iter().enumerate() {
            // Gray code bit j is spin j, which sits at index bit N-1-j.
            let code = gray(lo + offset as u64);
            let index = code.reverse_bits() >> (64 - n);
            energies[index as usize] = e;
        }
    }
    Ok(energies)
}

/// Probability mass per energy level; the values sum to 1 for a normalized state.
pub fn exact_distribution(state: &StateVector) -> Result<BTreeMap<i64, f64>> {
    let energies = basis_energies(state.n_qubits())?;
    let mut dist = BTreeMap::new();
    for (amp, e) in state.amplitudes().iter().zip(energies) {
        *dist.entry(e).or_insert(0.0) += amp.norm_sqr();
    }
    Ok(dist)
}

pub fn mean_energy(state: &StateVector) -> Result<f64> {
    Ok(exact_distribution(state)?.iter().map(|(&e, &p)| e as f64 * p).sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub bits: String,
    pub energy: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotSet {
    pub n: usize,
    pub bitstrings: Vec<String>,
    pub energies: Vec<i64>,
    pub rng_seed: u64,
}

impl ShotSet {
    pub fn len(&self) -> usize {
        self.bitstrings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bitstrings.is_empty()
    }

    /// Index of the lowest-energy shot, first occurrence on ties.
    pub fn best_index(&self) -> Option<usize> {
        self.energies
            .iter()
            .enumerate()
            .min_by_key(|&(i, &e)| (e, i))
            .map(|(i, _)| i)
    }

    pub fn best(&self) -> Result<SpinSequence> {
        let i = self.best_index().ok_or(Error::Empty("shot set"))?;
        self.bitstrings[i].parse()
    }

    pub fn records(&self) -> impl Iterator<Item = ShotRecord> + '_ {
        self.bitstrings
            .iter()
            .zip(&self.energies)
            .map(|(b, &e)| ShotRecord { bits: b.clone(), energy: e })
    }

    /// Writes one header line followed by one `{"bits", "energy"}` line per shot.
    pub fn write_jsonl<W: Write>(&self, mut out: W, header: &serde_json::Value) -> Result<()> {
        serde_json::to_writer(&mut out, header)?;
        out.write_all(b"\n")?;
        for rec in self.records() {
            serde_json::to_writer(&mut out, &rec)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads a file written by [`ShotSet::write_jsonl`]. Lines without a
    /// `bits` field are headers; `rng_seed` is taken from a header if present.
    /// Every energy is re-checked against the decoded bitstring.
    pub fn read_jsonl<R: BufRead>(input: R) -> Result<(Vec<serde_json::Value>, ShotSet)> {
        let mut headers = Vec::new();
        let mut bitstrings = Vec::new();
        let mut energies = Vec::new();
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let value: serde_json::Value = serde_json::from_str(&line)?;
            if value.get("bits").is_some() {
                let rec: ShotRecord = serde_json::from_value(value)?;
                let seq: SpinSequence = rec.bits.parse()?;
                if energy(&seq) != rec.energy {
                    return Err(Error::InvalidInput(format!(
                        "shot {} records energy {} but decodes to {}",
                        rec.bits,
                        rec.energy,
                        energy(&seq)
                    )));
                }
                bitstrings.push(rec.bits);
                energies.push(rec.energy);
            } else {
                headers.push(value);
            }
        }
        let n = bitstrings.first().map(String::len).ok_or(Error::Empty("shot file"))?;
        if let Some(bad) = bitstrings.iter().find(|b| b.len() != n) {
            return Err(Error::LengthMismatch(bad.len(), n));
        }
        let rng_seed = headers
            .iter()
            .find_map(|h| h.get("seed").and_then(serde_json::Value::as_u64))
            .unwrap_or(0);
        Ok((headers, ShotSet { n, bitstrings, energies, rng_seed }))
    }
}

/// Draws `n_shots` i.i.d. measurement outcomes by inverse-CDF lookup on a
/// ChaCha8 stream seeded with `seed`.
pub fn sample(state: &StateVector, n_shots: usize, seed: u64) -> Result<ShotSet> {
    if n_shots == 0 {
        return Err(Error::InvalidInput("n_shots must be at least 1".into()));
    }
    let n = state.n_qubits();
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    let mut cumulative = Vec::with_capacity(1 << n);
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bitstrings = Vec::with_capacity(n_shots);
    let mut energies = Vec::with_capacity(n_shots);
    for _ in 0..n_shots {
        let u = rng.random::<f64>() * acc;
        let index = cumulative.partition_point(|&c| c <= u).min(last_nonzero);
        let seq = SpinSequence::from_basis_index(index as u64, n)?;
        energies.push(energy(&seq));
        bitstrings.push(seq.to_bitstring());
    }
    Ok(ShotSet { n, bitstrings, energies, rng_seed: seed })
}
