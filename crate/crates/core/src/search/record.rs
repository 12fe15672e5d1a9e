use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::mts::RunOutcome;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mts,
    Qemts,
    QemtsMultirun,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Mts => "mts",
            Method::Qemts => "qemts",
            Method::QemtsMultirun => "qemts_multirun",
        }
    }

    pub fn is_quantum_seeded(self) -> bool {
        self != Method::Mts
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "mts" => Ok(Method::Mts),
            "qemts" | "qe_mts" => Ok(Method::Qemts),
            "qemts_multirun" | "qe_mts_multirun" => Ok(Method::QemtsMultirun),
            other => Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

/// Identity of one run within a benchmark campaign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RunKey {
    pub n: usize,
    pub method: Method,
    pub replicate_id: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub method: Method,
    pub replicate_id: u64,
    pub seed: u64,
    pub evals_to_solution: Option<u64>,
    pub best_energy: i64,
    pub target_energy: i64,
    pub found_optimum: bool,
    pub generations: u64,
    pub evaluations: u64,
    pub wall_clock_classical: f64,
    pub wall_clock_quantum: f64,
    #[serde(default)]
    pub metadata: serde_json::Value,
}

impl RunRecord {
    pub fn from_outcome(key: RunKey, target_energy: i64, outcome: &RunOutcome) -> Self {
        Self {
            n: key.n,
            method: key.method,
            replicate_id: key.replicate_id,
            seed: key.seed,
            evals_to_solution: outcome.evals_to_solution,
            best_energy: outcome.best_energy,
            target_energy,
            found_optimum: outcome.found_optimum,
            generations: outcome.generations,
            evaluations: outcome.evaluations,
            wall_clock_classical: 0.0,
            wall_clock_quantum: 0.0,
            metadata: serde_json::Value::Null,
        }
    }

    pub fn key(&self) -> RunKey {
        RunKey { n: self.n, method: self.method, replicate_id: self.replicate_id, seed: self.seed }
    }

    /// Checks the record's internal consistency.
    pub fn validate(&self) -> Result<()> {
        if self.found_optimum != self.evals_to_solution.is_some() {
            return Err(Error::InvalidInput(format!(
                "{:?}: evals_to_solution must be present exactly when found_optimum",
                self.key()
            )));
        }
        if self.found_optimum && self.best_energy > self.target_energy {
            return Err(Error::InvalidInput(format!("{:?}: found_optimum above target", self.key())));
        }
        if self.wall_clock_classical < 0.0 || self.wall_clock_quantum < 0.0 {
            return Err(Error::InvalidInput(format!("{:?}: negative wall clock", self.key())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_round_trip() {
        for m in [Method::Mts, Method::Qemts, Method::QemtsMultirun] {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
            let json = serde_json::to_string(&m).unwrap();
            assert_eq!(json, format!("\"{}\"", m.as_str()));
        }
        assert_eq!("qemts-multirun".parse::<Method>().unwrap(), Method::QemtsMultirun);
        assert!("sa".parse::<Method>().is_err());
    }

    #[test]
    fn record_validation() {
        let key = RunKey { n: 7, method: Method::Mts, replicate_id: 0, seed: 1 };
        let outcome = RunOutcome {
            best: "+++--+-".parse().unwrap(),
            best_energy: 3,
            found_optimum: true,
            evals_to_solution: Some(40),
            evaluations: 40,
            generations: 2,
        };
        let rec = RunRecord::from_outcome(key, 3, &outcome);
        rec.validate().unwrap();
        let line = serde_json::to_string(&rec).unwrap();
        assert_eq!(serde_json::from_str::<RunRecord>(&line).unwrap(), rec);
        let mut bad = rec.clone();
        bad.evals_to_solution = None;
        assert!(bad.validate().is_err());
    }
}
