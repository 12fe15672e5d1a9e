//! Runs the (N, method, replicate, seed) grid and persists one JSONL record per run.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cd::{FieldConfig, Schedule};
use crate::error::{Error, Result};
use crate::rng;
use crate::search::{
    mts_run, qemts_multi_run_population, qemts_seed_population, random_population, DeltaMode, Method,
    RunKey, RunRecord, SearchParams,
};
use crate::sequence::SpinSequence;
use crate::sim::{build_circuit, sample, simulate, ShotSet, StateVector};
use crate::stats::TTSDataset;

/// Search parameters shared by every run; `None` picks the per-N default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchTemplate {
    pub population_size: usize,
    pub p_comb: f64,
    pub p_mut: Option<f64>,
    pub tournament_size: usize,
    pub max_generations: Option<u64>,
    pub max_evaluations: Option<u64>,
}

impl Default for SearchTemplate {
    fn default() -> Self {
        Self {
            population_size: 100,
            p_comb: 0.9,
            p_mut: None,
            tournament_size: 2,
            max_generations: None,
            max_evaluations: None,
        }
    }
}

impl SearchTemplate {
    pub fn params(&self, n: usize, target_energy: i64) -> SearchParams {
        SearchParams {
            population_size: self.population_size,
            p_comb: self.p_comb,
            p_mut: self.p_mut.unwrap_or(1.0 / n as f64),
            tournament_size: self.tournament_size,
            max_generations: self.max_generations.unwrap_or(u64::MAX),
            target_energy,
            max_evaluations: self.max_evaluations,
            delta_mode: DeltaMode::Incremental,
        }
    }
}

/// DCQO sampling used to seed the quantum-enhanced methods.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub shots: usize,
    pub n_trot: usize,
    pub schedule: Schedule,
    /// Independent sampling runs pooled by the multi-run variant.
    pub runs: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { shots: 1000, n_trot: 100, schedule: Schedule::default(), runs: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrchestrateConfig {
    pub lengths: Vec<usize>,
    pub methods: Vec<Method>,
    /// Half-open replicate id range.
    pub replicates: (u64, u64),
    /// Half-open seed index range.
    pub seeds: (u64, u64),
    pub master_seed: u64,
    pub search: SearchTemplate,
    pub targets: BTreeMap<usize, i64>,
    pub sampler: SamplerConfig,
    /// Pre-sampled shot files by N; replaces on-the-fly sampling when present.
    #[serde(default)]
    pub shot_files: BTreeMap<usize, Vec<PathBuf>>,
    pub record_wall_clock: bool,
}

impl OrchestrateConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lengths.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidInput("need at least one N and one method".into()));
        }
        if self.replicates.0 >= self.replicates.1 || self.seeds.0 >= self.seeds.1 {
            return Err(Error::InvalidInput("replicate and seed ranges must be nonempty".into()));
        }
        for &n in &self.lengths {
            let target = self
                .targets
                .get(&n)
                .ok_or_else(|| Error::InvalidInput(format!("no target energy for N = {n}")))?;
            self.search.params(n, *target).validate()?;
        }
        if self.sampler.shots == 0 || self.sampler.runs == 0 {
            return Err(Error::InvalidInput("shots and sampler runs must be positive".into()));
        }
        Ok(())
    }

    /// Every run key in canonical order.
    pub fn keys(&self) -> Vec<RunKey> {
        let mut keys = Vec::new();
        for &n in &self.lengths {
            for &method in &self.methods {
                for replicate_id in self.replicates.0..self.replicates.1 {
                    for seed in self.seeds.0..self.seeds.1 {
                        keys.push(RunKey { n, method, replicate_id, seed });
                    }
                }
            }
        }
        keys.sort();
        keys.dedup();
        keys
    }
}

/// Seed for DCQO sampling run `run` of replicate `replicate` at length `n`.
pub fn sampling_seed(master: u64, n: usize, replicate: u64, run: u64) -> u64 {
    rng::derive_seed(master, &[rng::label("dcqo"), n as u64, replicate, run])
}

fn population_stream(master: u64, n: usize, method: Method, replicate: u64) -> rand_chacha::ChaCha8Rng {
    rng::stream(master, &[rng::label("population"), n as u64, rng::label(method.as_str()), replicate])
}

fn search_stream(master: u64, key: &RunKey) -> rand_chacha::ChaCha8Rng {
    rng::stream(
        master,
        &[rng::label("search"), key.n as u64, rng::label(key.method.as_str()), key.replicate_id, key.seed],
    )
}

struct Seeding {
    population: Vec<SpinSequence>,
    quantum_seconds: f64,
    info: serde_json::Value,
}

/// Final DCQO states per N, simulated once and shared by every replicate.
fn final_states(config: &OrchestrateConfig, pending: &[RunKey]) -> Result<BTreeMap<usize, (StateVector, f64)>> {
    let mut out = BTreeMap::new();
    for key in pending {
        if !key.method.is_quantum_seeded() || out.contains_key(&key.n) || config.shot_files.contains_key(&key.n) {
            continue;
        }
        let start = Instant::now();
        let plan = build_circuit(key.n, &config.sampler.schedule, config.sampler.n_trot, &FieldConfig::uniform(key.n))?;
        let state = simulate(&plan)?;
        out.insert(key.n, (state, start.elapsed().as_secs_f64()));
    }
    Ok(out)
}

fn load_shot_files(paths: &[PathBuf]) -> Result<Vec<ShotSet>> {
    paths
        .iter()
        .map(|p| {
            let f = File::open(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            Ok(ShotSet::read_jsonl(BufReader::new(f))?.1)
        })
        .collect()
}

fn seed_population(
    config: &OrchestrateConfig,
    states: &BTreeMap<usize, (StateVector, f64)>,
    n: usize,
    method: Method,
    replicate: u64,
) -> Result<Seeding> {
    let k = config.search.population_size;
    if method == Method::Mts {
        let mut g = population_stream(config.master_seed, n, method, replicate);
        return Ok(Seeding {
            population: random_population(n, k, &mut g)?,
            quantum_seconds: 0.0,
            info: serde_json::json!({"source": "random"}),
        });
    }
    let runs = if method == Method::QemtsMultirun { config.sampler.runs } else { 1 };
    let (sets, seconds, info) = match config.shot_files.get(&n) {
        Some(paths) => {
            let sets = load_shot_files(paths)?;
            if let Some(bad) = sets.iter().find(|s| s.n != n) {
                return Err(Error::LengthMismatch(bad.n, n));
            }
            let names: Vec<String> = paths
                .iter()
                .map(|p| p.file_name().unwrap_or(p.as_os_str()).to_string_lossy().into_owned())
                .collect();
            (sets, 0.0, serde_json::json!({"source": "shot_files", "files": names}))
        }
        None => {
            let (state, sim_seconds) = &states[&n];
            let start = Instant::now();
            let seeds: Vec<u64> =
                (0..runs as u64).map(|r| sampling_seed(config.master_seed, n, replicate, r)).collect();
            let sets = seeds.iter().map(|&s| sample(state, config.sampler.shots, s)).collect::<Result<Vec<_>>>()?;
            let secs = sim_seconds + start.elapsed().as_secs_f64();
            (sets, secs, serde_json::json!({"source": "dcqo", "sampling_seeds": seeds, "sampler": config.sampler}))
        }
    };
    let population = match method {
        Method::Qemts => qemts_seed_population(&sets[0], k)?,
        _ => qemts_multi_run_population(&sets, k)?,
    };
    Ok(Seeding { population, quantum_seconds: seconds, info })
}

fn run_one(config: &OrchestrateConfig, key: RunKey, seeding: &Seeding) -> Result<RunRecord> {
    let target = config.targets[&key.n];
    let params = config.search.params(key.n, target);
    let mut g = search_stream(config.master_seed, &key);
    let start = Instant::now();
    let outcome = mts_run(&params, seeding.population.clone(), &mut g)?;
    let classical = start.elapsed().as_secs_f64();
    let mut record = RunRecord::from_outcome(key, target, &outcome);
    if config.record_wall_clock {
        record.wall_clock_classical = classical;
        record.wall_clock_quantum = seeding.quantum_seconds;
    }
    record.metadata = serde_json::json!({
        "params": params,
        "population": seeding.info,
        "master_seed": config.master_seed,
    });
    Ok(record)
}

/// Header line written at the top of every run file.
pub fn header(config: &OrchestrateConfig, echo: &serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "kind": "config",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "orchestrate": config,
        "config": echo,
    })
}

fn append_line<W: Write>(out: &mut W, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Runs every grid key not already present in `out`, appending records as
/// they finish, then rewrites `out` as the header followed by all records
/// in canonical key order. Existing records are kept untouched, so an
/// interrupted campaign resumes where it stopped.
pub fn orchestrate(config: &OrchestrateConfig, out: &Path, echo: &serde_json::Value) -> Result<TTSDataset> {
    config.validate()?;
    let mut dataset = if out.exists() {
        let f = File::open(out)?;
        TTSDataset::read_jsonl(BufReader::new(f))?.1
    } else {
        TTSDataset::new()
    };
    let pending: Vec<RunKey> = config.keys().into_iter().filter(|k| !dataset.contains(k)).collect();

    if !pending.is_empty() {
        let states = final_states(config, &pending)?;
        let mut groups: BTreeMap<(usize, Method, u64), Vec<RunKey>> = BTreeMap::new();
        for k in &pending {
            groups.entry((k.n, k.method, k.replicate_id)).or_default().push(*k);
        }
        let seedings: BTreeMap<(usize, Method, u64), Seeding> = groups
            .keys()
            .map(|&(n, m, r)| Ok(((n, m, r), seed_population(config, &states, n, m, r)?)))
            .collect::<Result<_>>()?;

        let file = OpenOptions::new().create(true).append(true).open(out)?;
        let sink = Mutex::new(BufWriter::new(file));
        if dataset.is_empty() {
            append_line(&mut *sink.lock().expect("sink lock"), &header(config, echo))?;
        }
        let records = pending
            .par_iter()
            .map(|key| {
                let rec = run_one(config, *key, &seedings[&(key.n, key.method, key.replicate_id)])?;
                let mut w = sink.lock().expect("sink lock");
                append_line(&mut *w, &rec)?;
                w.flush()?;
                Ok(rec)
            })
            .collect::<Result<Vec<_>>>()?;
        drop(sink);
        for r in records {
            dataset.insert(r)?;
        }
    }

    let tmp = out.with_extension("jsonl.tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        append_line(&mut w, &header(config, echo))?;
        dataset.write_jsonl(&mut w)?;
        w.flush()?;
    }
    fs::rename(&tmp, out)?;
    Ok(dataset)
}
