use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};

pub const CONFIG_HELP: &str = "\
Configuration:
  Any long flag can also be set in a flat JSON object passed with --config
  (keys are flag names, e.g. {\"seed\": 7, \"p-comb\": 0.8}) or through an
  environment variable LABS_<FLAG> with dashes as underscores (e.g.
  LABS_SEED=7, LABS_P_COMB=0.8). Precedence: command line, then config file,
  then environment, then built-in defaults.

Exit codes: 0 success, 1 usage error, 2 runtime error.";

#[derive(Debug, Parser)]
#[command(name = "labs", version, about = "LABS solver and benchmark suite", after_help = CONFIG_HELP)]
pub struct Cli {
    /// JSON file of flag values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy of one sequence.
    Energy(EnergyArgs),
    /// Exhaustive optimum for small N.
    Brute(BruteArgs),
    /// Ising Hamiltonian terms as JSON.
    Hamiltonian(HamiltonianArgs),
    /// First-order counterdiabatic coefficients on a lambda grid (CSV).
    Cd(CdArgs),
    /// Entangling and single-qubit gate counts.
    Gates(GatesArgs),
    /// Simulate the DCQO circuit and sample bitstrings (JSONL).
    DcqoSample(SampleArgs),
    /// Run MTS or quantum-seeded MTS over a grid of lengths, replicates and seeds.
    Solve(SolveArgs),
    /// Exhaustive single-flip local-minimum densities (CSV).
    Landscape(LandscapeArgs),
    /// Scaling fits, bootstrap intervals and crossover from run records.
    Analyze(AnalyzeArgs),
}

fn file_name<S: Serializer>(path: &Path, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default())
}

fn file_names<S: Serializer>(paths: &[PathBuf], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(paths.iter().map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()))
}

#[derive(Debug, Args, Serialize)]
pub struct EnergyArgs {
    /// Sequence as +/- characters or 0/1 bits (0 is +1).
    #[arg(long, allow_hyphen_values = true)]
    pub seq: String,
    /// Print the energy and correlations as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct BruteArgs {
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct HamiltonianArgs {
    #[arg(long)]
    pub n: usize,
    /// Write to a file instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CdArgs {
    #[arg(long)]
    pub n: usize,
    /// Number of evenly spaced lambda values in [0, 1].
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    /// Uniform transverse field.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub h_x: f64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GateMethodArg {
    Dcqo,
    Qaoa,
}

#[derive(Debug, Args, Serialize)]
pub struct GatesArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub method: GateMethodArg,
    /// QAOA layers.
    #[arg(long, conflicts_with = "steps")]
    pub layers: Option<u64>,
    /// DCQO Trotter steps.
    #[arg(long)]
    pub steps: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SamplerArgs {
    /// Measurement shots per sampling run.
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    /// Trotter steps.
    #[arg(long, default_value_t = 100)]
    pub trotter: usize,
    #[arg(long, default_value_t = 1.0)]
    pub total_time: f64,
    /// sin_squared or linear.
    #[arg(long, default_value = "sin_squared")]
    pub schedule: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Mts,
    Qemts,
    QemtsMultirun,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    /// Comma-separated methods.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "mts")]
    pub method: Vec<MethodArg>,
    /// Lengths: N, a:b (inclusive), a:b:step, or comma-separated items.
    #[arg(long)]
    pub n: String,
    /// Target energy (single N only); defaults to the known-optima table.
    #[arg(long, allow_negative_numbers = true)]
    pub target: Option<i64>,
    /// Fall back to brute force when N is not in the table.
    #[arg(long)]
    pub target_auto: bool,
    /// Population size K.
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long, default_value_t = 0.9)]
    pub p_comb: f64,
    /// Defaults to 1/N.
    #[arg(long)]
    pub p_mut: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub tournament: usize,
    /// Generation cap (unbounded by default).
    #[arg(long)]
    pub gmax: Option<u64>,
    /// Evaluation budget per run (unbounded by default).
    #[arg(long)]
    pub max_evals: Option<u64>,
    /// Seed indices a:b (half-open) or a count c meaning 0:c.
    #[arg(long, default_value = "0:10")]
    pub seeds: String,
    /// Replicate ids a:b (half-open) or a count c meaning 0:c.
    #[arg(long, default_value = "0:1")]
    pub replicates: String,
    /// Pre-sampled DCQO shots (repeatable) used instead of simulating.
    #[arg(long)]
    #[serde(serialize_with = "file_names")]
    pub shots_file: Vec<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub sampler: SamplerArgs,
    /// Independent sampling runs pooled by qemts-multirun.
    #[arg(long, default_value_t = 4)]
    pub sampler_runs: usize,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "runs.jsonl")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    /// Record zero wall-clock times so outputs are reproducible byte for byte.
    #[arg(long)]
    pub no_wall_clock: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Labs,
    Sk,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct LandscapeArgs {
    /// a:b or a:b:step, inclusive.
    #[arg(long)]
    pub n_range: String,
    #[arg(long, value_enum, default_value = "both")]
    pub model: ModelArg,
    /// SK instances per length.
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "landscape.csv")]
    #[serde(skip)]
    pub out: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    /// Run records (JSONL) written by `solve`.
    #[arg(long = "in")]
    #[serde(rename = "in", serialize_with = "file_name")]
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.10,0.50,0.90")]
    pub quantiles: Vec<f64>,
    /// Bootstrap draws.
    #[arg(long, default_value_t = 5000)]
    pub bootstrap: usize,
    /// Inclusive N range a:b used in fits.
    #[arg(long)]
    pub fit_range: Option<String>,
    /// Quantile of the seeded method and of plain MTS for the crossover.
    #[arg(long, value_delimiter = ',', default_value = "0.95,0.05")]
    pub crossover_quantiles: Vec<f64>,
    /// Replicates with a larger fraction of unsolved seeds are dropped.
    #[arg(long, default_value_t = 0.5)]
    pub max_censored: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "report.json")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Directory for plotting CSVs.
    #[arg(long)]
    #[serde(skip)]
    pub csv_dir: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
}
