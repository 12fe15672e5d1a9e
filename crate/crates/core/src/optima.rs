//! Known optimal LABS energies shipped with the crate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TABLE: &str = include_str!("../data/known_optima.csv");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Re-derived by exhaustive enumeration in this repository's tests.
    BruteForced,
    /// Taken from published exhaustive searches.
    External,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownOptimum {
    pub n: usize,
    pub energy: i64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownOptimaTable {
    entries: BTreeMap<usize, KnownOptimum>,
}

impl KnownOptimaTable {
    /// The table bundled at build time.
    pub fn bundled() -> Self {
        Self::parse(TABLE).expect("bundled optima table is well formed")
    }

    /// Parses `n,energy,provenance` CSV with a header row.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut entries = BTreeMap::new();
        for row in reader.deserialize() {
            let e: KnownOptimum = row.map_err(|e| Error::InvalidInput(e.to_string()))?;
            if entries.insert(e.n, e).is_some() {
                return Err(Error::InvalidInput(format!("duplicate entry for N = {}", e.n)));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, n: usize) -> Option<KnownOptimum> {
        self.entries.get(&n).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &KnownOptimum> {
        self.entries.values()
    }
}
