//! Statevector simulation of the impulse-regime counterdiabatic circuit.
//!
//! Basis index layout: qubit 1 is the most significant bit, so the bitstring
//! `b_0 ... b_{N-1}` read left to right is the binary index, and `b_j`
//! belongs to qubit `j + 1` (spin `+1` for bit 0).

mod circuit;
mod resources;
mod sampling;
mod statevector;

pub use circuit::{build_circuit, simulate, BlockKind, CircuitPlan, RotationBlock, TrotterStep};
pub use resources::{resource_count, GateMethod, ResourceCount};
pub use sampling::{basis_energies, exact_distribution, mean_energy, sample, ShotRecord, ShotSet};
pub use statevector::StateVector;

/// Largest register the exact-distribution and sampling helpers accept.
pub const SIM_CAP: usize = 24;
