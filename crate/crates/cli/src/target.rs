use anyhow::{bail, Result};
use labs_core::brute::{brute_force_optimum, BRUTE_FORCE_CAP};
use labs_core::optima::KnownOptimaTable;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetSource {
    Flag,
    Table,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolvedTarget {
    pub energy: i64,
    pub source: TargetSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Explicit flag, then the bundled table, then brute force (only with `auto`).
pub fn resolve_target(n: usize, flag: Option<i64>, auto: bool, table: &KnownOptimaTable) -> Result<ResolvedTarget> {
    let known = table.get(n).map(|e| e.energy);
    if let Some(energy) = flag {
        if energy < 0 {
            bail!("target energy must be nonnegative");
        }
        let warning = match known {
            Some(k) if energy > k => Some(format!("target {energy} is above the known optimum {k} for N = {n}")),
            Some(k) if energy < k => {
                Some(format!("target {energy} is below the known optimum {k} for N = {n}; runs cannot succeed"))
            }
            _ => None,
        };
        return Ok(ResolvedTarget { energy, source: TargetSource::Flag, warning });
    }
    if let Some(energy) = known {
        return Ok(ResolvedTarget { energy, source: TargetSource::Table, warning: None });
    }
    if auto && n <= BRUTE_FORCE_CAP {
        let energy = brute_force_optimum(n)?.optimal_energy;
        return Ok(ResolvedTarget { energy, source: TargetSource::BruteForce, warning: None });
    }
    bail!(
        "no target energy for N = {n}: pass --target, or --target-auto for N <= {BRUTE_FORCE_CAP} \
         (the bundled table covers N = 2..66)"
    )
}
