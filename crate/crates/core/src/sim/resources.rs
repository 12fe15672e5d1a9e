use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::term_counts;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateMethod {
    Dcqo,
    Qaoa,
}

impl std::str::FromStr for GateMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dcqo" => Ok(GateMethod::Dcqo),
            "qaoa" => Ok(GateMethod::Qaoa),
            other => Err(Error::InvalidInput(format!("unknown gate method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCount {
    pub n: usize,
    pub method: GateMethod,
    /// Trotter steps for DCQO, layers for QAOA.
    pub repetitions: u64,
    pub entangling: u64,
    pub single_qubit: u64,
}

/// Gate counts for `repetitions` DCQO Trotter steps or QAOA layers.
///
/// DCQO: a `R_YZ R_ZY` block costs 2 `R_ZZ` + 4 single-qubit gates, a
/// four-rotation block 10 `R_ZZ` + 28 single-qubit gates.
/// QAOA: one `R_ZZ` per two-body term; a four-body phase is a CNOT ladder
/// around a central `R_ZZ` (5 entangling gates); the mixer adds `N` `R_X`.
pub fn resource_count(n: usize, method: GateMethod, repetitions: u64) -> Result<ResourceCount> {
    let (two, four) = term_counts(n)?;
    let (entangling, single_qubit) = match method {
        GateMethod::Dcqo => (2 * two + 10 * four, 4 * two + 28 * four),
        GateMethod::Qaoa => (two + 5 * four, n as u64),
    };
    Ok(ResourceCount {
        n,
        method,
        repetitions,
        entangling: entangling * repetitions,
        single_qubit: single_qubit * repetitions,
    })
}
