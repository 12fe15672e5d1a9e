//! Low-autocorrelation binary sequences: exact objective, Ising encoding,
//! counterdiabatic circuit simulation, memetic tabu search and
//! time-to-solution scaling statistics.

pub mod brute;
pub mod cd;
pub mod error;
pub mod hamiltonian;
pub mod landscape;
pub mod objective;
pub mod optima;
pub mod orchestrate;
pub mod pauli;
pub mod rng;
pub mod search;
pub mod sequence;
pub mod sim;
pub mod stats;

pub use brute::{brute_force_optimum, BruteForceResult};
pub use cd::{FieldConfig, Schedule, ScheduleKind};
pub use error::{Error, Result};
pub use hamiltonian::{build_hamiltonian, ProblemHamiltonian};
pub use landscape::{LandscapeStats, SKInstance};
pub use objective::{energy, AutocorrelationProfile};
pub use optima::KnownOptimaTable;
pub use pauli::{PauliOperator, PauliWord};
pub use search::{Method, RunRecord, SearchParams};
pub use sequence::SpinSequence;
pub use sim::{CircuitPlan, ShotSet, StateVector};
pub use stats::{BootstrapResult, CrossoverEstimate, FitResult, TTSDataset};
