//! Time-to-solution statistics: censored replicate medians, quantile fits,
//! two-stage bootstrap, crossover and log-ratio gaps.

mod bootstrap;
mod crossover;
mod dataset;
mod fit;
mod quantile;
mod report;
mod synthetic;

pub use bootstrap::{
    bootstrap_draws, fit_quantile, point_medians, two_stage_bootstrap, BootstrapResult, DrawMedians,
    FitRange, Interval, ResampleMode,
};
pub use crossover::{
    crossover, crossover_distribution, log_ratio_gap, CrossoverEstimate, CrossoverSpec, GapDistribution,
};
pub use dataset::{
    replicate_medians, CensoringNote, CensoringPolicy, ReplicateData, TTSDataset, TtsGrid,
};
pub use fit::{loglinear_fit, FitResult};
pub use quantile::{median, quantile};
pub use report::{
    analyze, write_csv_bundle, AnalysisConfig, QuantileSummary, ReplicateMedian, Report,
    REPORT_SCHEMA_VERSION,
};
pub use synthetic::SyntheticSpec;
