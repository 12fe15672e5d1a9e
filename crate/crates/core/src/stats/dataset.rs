use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::quantile::median;
use crate::error::{Error, Result};
use crate::search::{Method, RunKey, RunRecord};

/// Run records keyed by `(N, method, replicate, seed)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TTSDataset {
    records: BTreeMap<RunKey, RunRecord>,
}

impl TTSDataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_records<I: IntoIterator<Item = RunRecord>>(records: I) -> Result<Self> {
        let mut ds = Self::new();
        for r in records {
            ds.insert(r)?;
        }
        Ok(ds)
    }

    /// Adds a record; duplicate keys and inconsistent records are errors.
    pub fn insert(&mut self, record: RunRecord) -> Result<()> {
        record.validate()?;
        let key = record.key();
        if self.records.insert(key, record).is_some() {
            return Err(Error::InvalidInput(format!("duplicate run key {key:?}")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains(&self, key: &RunKey) -> bool {
        self.records.contains_key(key)
    }

    /// Records in canonical key order.
    pub fn records(&self) -> impl Iterator<Item = &RunRecord> {
        self.records.values()
    }

    pub fn methods(&self) -> BTreeSet<Method> {
        self.records.keys().map(|k| k.method).collect()
    }

    pub fn lengths(&self, method: Method) -> BTreeSet<usize> {
        self.records.keys().filter(|k| k.method == method).map(|k| k.n).collect()
    }

    /// Reads JSONL, skipping lines whose `"kind"` field marks them as headers.
    /// Returns the header objects alongside the dataset.
    pub fn read_jsonl<R: BufRead>(input: R) -> Result<(Vec<serde_json::Value>, Self)> {
        let mut headers = Vec::new();
        let mut ds = Self::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let value: serde_json::Value = serde_json::from_str(&line)
                .map_err(|e| Error::InvalidInput(format!("line {}: {e}", lineno + 1)))?;
            if value.get("kind").is_some() {
                headers.push(value);
                continue;
            }
            let record: RunRecord = serde_json::from_value(value)
                .map_err(|e| Error::InvalidInput(format!("line {}: {e}", lineno + 1)))?;
            ds.insert(record)?;
        }
        Ok((headers, ds))
    }

    /// Writes records one per line in canonical key order.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for r in self.records.values() {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Successful TTS values grouped by method, N and replicate, with
    /// replicates and seeds in key order. Censored seeds are counted, not kept.
    pub fn grouped(&self) -> BTreeMap<(Method, usize), BTreeMap<u64, ReplicateData>> {
        let mut out: BTreeMap<(Method, usize), BTreeMap<u64, ReplicateData>> = BTreeMap::new();
        for r in self.records.values() {
            let rep = out.entry((r.method, r.n)).or_default().entry(r.replicate_id).or_default();
            match r.evals_to_solution {
                Some(y) => rep.tts.push(y as f64),
                None => rep.censored += 1,
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplicateData {
    pub tts: Vec<f64>,
    pub censored: usize,
}

impl ReplicateData {
    pub fn total(&self) -> usize {
        self.tts.len() + self.censored
    }
}

/// Replicates with more than `max_censored_fraction` unsuccessful seeds are
/// dropped; in kept replicates unsuccessful seeds are left out of the median.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensoringPolicy {
    pub max_censored_fraction: f64,
}

impl Default for CensoringPolicy {
    fn default() -> Self {
        Self { max_censored_fraction: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensoringNote {
    pub n: usize,
    pub method: Method,
    pub replicate_id: u64,
    pub censored: usize,
    pub total: usize,
    pub excluded: bool,
}

/// Per-(method, N) replicate seed samples after censoring.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TtsGrid {
    /// Replicate samples in replicate-id order, each nonempty.
    pub cells: BTreeMap<(Method, usize), Vec<(u64, Vec<f64>)>>,
    pub notes: Vec<CensoringNote>,
}

impl TtsGrid {
    pub fn build(dataset: &TTSDataset, policy: CensoringPolicy) -> Self {
        let mut grid = TtsGrid::default();
        for ((method, n), reps) in dataset.grouped() {
            let mut kept = Vec::new();
            for (rid, rep) in reps {
                let frac = rep.censored as f64 / rep.total() as f64;
                let excluded = rep.tts.is_empty() || frac > policy.max_censored_fraction;
                if rep.censored > 0 {
                    grid.notes.push(CensoringNote {
                        n,
                        method,
                        replicate_id: rid,
                        censored: rep.censored,
                        total: rep.total(),
                        excluded,
                    });
                }
                if !excluded {
                    kept.push((rid, rep.tts));
                }
            }
            if !kept.is_empty() {
                grid.cells.insert((method, n), kept);
            }
        }
        grid
    }

    pub fn methods(&self) -> BTreeSet<Method> {
        self.cells.keys().map(|k| k.0).collect()
    }

    pub fn lengths(&self, method: Method) -> Vec<usize> {
        self.cells.keys().filter(|k| k.0 == method).map(|k| k.1).collect()
    }
}

/// Median TTS over seeds for each `(N, method, replicate)`.
pub fn replicate_medians(
    dataset: &TTSDataset,
    policy: CensoringPolicy,
) -> Result<(BTreeMap<(usize, Method, u64), f64>, Vec<CensoringNote>)> {
    if dataset.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    let grid = TtsGrid::build(dataset, policy);
    let mut out = BTreeMap::new();
    for ((method, n), reps) in &grid.cells {
        for (rid, tts) in reps {
            out.insert((*n, *method, *rid), median(tts)?);
        }
    }
    Ok((out, grid.notes))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rec(n: usize, method: Method, rep: u64, seed: u64, tts: Option<u64>) -> RunRecord {
        RunRecord {
            n,
            method,
            replicate_id: rep,
            seed,
            evals_to_solution: tts,
            best_energy: if tts.is_some() { 0 } else { 5 },
            target_energy: 0,
            found_optimum: tts.is_some(),
            generations: 1,
            evaluations: tts.unwrap_or(1000),
            wall_clock_classical: 0.0,
            wall_clock_quantum: 0.0,
            metadata: serde_json::Value::Null,
        }
    }

    #[test]
    fn medians_odd_even_and_order() {
        let ds = TTSDataset::from_records([
            rec(5, Method::Mts, 0, 2, Some(3)),
            rec(5, Method::Mts, 0, 0, Some(1)),
            rec(5, Method::Mts, 0, 1, Some(2)),
            rec(5, Method::Mts, 1, 0, Some(4)),
            rec(5, Method::Mts, 1, 1, Some(1)),
            rec(5, Method::Mts, 1, 2, Some(2)),
            rec(5, Method::Mts, 1, 3, Some(3)),
        ])
        .unwrap();
        let (m, notes) = replicate_medians(&ds, CensoringPolicy::default()).unwrap();
        assert_eq!(m[&(5, Method::Mts, 0)], 2.0);
        assert_eq!(m[&(5, Method::Mts, 1)], 2.5);
        assert!(notes.is_empty());
    }

    #[test]
    fn duplicate_keys_rejected() {
        let r = rec(5, Method::Mts, 0, 0, Some(1));
        assert!(TTSDataset::from_records([r.clone(), r]).is_err());
    }

    #[test]
    fn censoring_policy() {
        let ds = TTSDataset::from_records([
            rec(6, Method::Mts, 0, 0, Some(10)),
            rec(6, Method::Mts, 0, 1, None),
            rec(6, Method::Mts, 0, 2, Some(30)),
            rec(6, Method::Mts, 1, 0, None),
            rec(6, Method::Mts, 1, 1, None),
            rec(6, Method::Mts, 1, 2, Some(5)),
        ])
        .unwrap();
        let (m, notes) = replicate_medians(&ds, CensoringPolicy::default()).unwrap();
        assert_eq!(m[&(6, Method::Mts, 0)], 20.0);
        assert!(!m.contains_key(&(6, Method::Mts, 1)));
        assert_eq!(notes.len(), 2);
        assert!(!notes[0].excluded && notes[1].excluded);
    }

    #[test]
    fn jsonl_round_trip_skips_headers() {
        let ds = TTSDataset::from_records([
            rec(5, Method::Qemts, 0, 0, Some(7)),
            rec(5, Method::Mts, 0, 0, None),
        ])
        .unwrap();
        let mut buf = b"{\"kind\":\"config\",\"seed\":1}\n".to_vec();
        ds.write_jsonl(&mut buf).unwrap();
        let (headers, back) = TTSDataset::read_jsonl(&buf[..]).unwrap();
        assert_eq!(headers.len(), 1);
        assert_eq!(back, ds);
    }
}
