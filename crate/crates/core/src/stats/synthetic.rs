use rand_distr::{Distribution, StandardNormal};

use crate::rng;
use crate::search::{Method, RunRecord};

/// Generator for TTS datasets with known exponential scaling:
/// `Y = exp(alpha + N ln(kappa) + replicate_sigma·z_r + seed_sigma·z_s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub method: Method,
    pub n_values: Vec<usize>,
    pub replicates: u64,
    pub seeds: u64,
    pub kappa: f64,
    pub alpha: f64,
    pub replicate_sigma: f64,
    pub seed_sigma: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            method: Method::Mts,
            n_values: (10..=20).collect(),
            replicates: 10,
            seeds: 10,
            kappa: 1.3,
            alpha: 50f64.ln(),
            replicate_sigma: 0.3,
            seed_sigma: 0.5,
        }
    }
}

impl SyntheticSpec {
    pub fn generate(&self, seed: u64) -> Vec<RunRecord> {
        let mut out = Vec::new();
        let tag = rng::label(self.method.as_str());
        for &n in &self.n_values {
            for r in 0..self.replicates {
                let mut g = rng::stream(seed, &[tag, n as u64, r]);
                let zr: f64 = StandardNormal.sample(&mut g);
                for s in 0..self.seeds {
                    let zs: f64 = StandardNormal.sample(&mut g);
                    let y = (self.alpha
                        + n as f64 * self.kappa.ln()
                        + self.replicate_sigma * zr
                        + self.seed_sigma * zs)
                        .exp()
                        .round()
                        .max(1.0) as u64;
                    out.push(RunRecord {
                        n,
                        method: self.method,
                        replicate_id: r,
                        seed: s,
                        evals_to_solution: Some(y),
                        best_energy: 0,
                        target_energy: 0,
                        found_optimum: true,
                        generations: 0,
                        evaluations: y,
                        wall_clock_classical: 0.0,
                        wall_clock_quantum: 0.0,
                        metadata: serde_json::Value::Null,
                    });
                }
            }
        }
        out
    }
}
