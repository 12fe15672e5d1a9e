use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::bootstrap::{point_medians, two_stage_bootstrap, BootstrapResult, FitRange, ResampleMode};
use super::crossover::{crossover_distribution, log_ratio_gap, CrossoverEstimate, CrossoverSpec, GapDistribution};
use super::dataset::{CensoringNote, CensoringPolicy, TTSDataset, TtsGrid};
use super::quantile::{median, quantile_sorted};
use crate::error::{Error, Result};
use crate::search::Method;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub quantiles: Vec<f64>,
    pub bootstrap: usize,
    pub fit_range: FitRange,
    pub crossover: CrossoverSpec,
    pub seed: u64,
    pub censoring: CensoringPolicy,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            quantiles: vec![0.10, 0.50, 0.90],
            bootstrap: 5000,
            fit_range: None,
            crossover: CrossoverSpec::default(),
            seed: 0,
            censoring: CensoringPolicy::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileSummary {
    pub n: usize,
    pub method: Method,
    pub p: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicateMedian {
    pub n: usize,
    pub method: Method,
    pub replicate_id: u64,
    pub median: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub quantile_definition: String,
    pub analysis: AnalysisConfig,
    /// Free-form configuration echo supplied by the caller.
    pub config: serde_json::Value,
    pub censoring: Vec<CensoringNote>,
    pub replicate_medians: Vec<ReplicateMedian>,
    pub quantiles: Vec<QuantileSummary>,
    pub fits: Vec<BootstrapResult>,
    pub crossover: Option<CrossoverEstimate>,
    pub gaps: Vec<GapDistribution>,
}

/// Medians, quantiles, bootstrapped fits, crossover and gaps for a dataset.
/// The crossover is computed only when both of its methods are present, and
/// gaps for each seeded method that shares lengths with plain MTS.
pub fn analyze(dataset: &TTSDataset, config: &AnalysisConfig, echo: serde_json::Value) -> Result<Report> {
    if dataset.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    for &p in config.quantiles.iter().chain([&config.crossover.p_a, &config.crossover.p_b]) {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidInput(format!("quantile level {p} outside [0, 1]")));
        }
    }
    let grid = TtsGrid::build(dataset, config.censoring);
    if grid.cells.is_empty() {
        return Err(Error::InsufficientData("no successful runs after censoring".into()));
    }
    let mode = ResampleMode::Random { seed: config.seed };

    let mut replicate_medians = Vec::new();
    for ((method, n), reps) in &grid.cells {
        for (rid, tts) in reps {
            replicate_medians.push(ReplicateMedian { n: *n, method: *method, replicate_id: *rid, median: median(tts)? });
        }
    }
    let point = point_medians(&grid);
    let mut levels = config.quantiles.clone();
    levels.extend([config.crossover.p_a, config.crossover.p_b]);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut quantiles = Vec::new();
    for ((method, n), meds) in &point {
        for &p in &levels {
            quantiles.push(QuantileSummary { n: *n, method: *method, p, value: quantile_sorted(meds, p) });
        }
    }

    let fits = two_stage_bootstrap(&grid, config.bootstrap, &config.quantiles, config.fit_range, mode)?;
    let methods = grid.methods();
    let spec = config.crossover;
    let crossover = if methods.contains(&spec.method_a) && methods.contains(&spec.method_b) {
        Some(crossover_distribution(&grid, spec, config.bootstrap, config.fit_range, mode)?)
    } else {
        None
    };
    let mut gaps = Vec::new();
    if methods.contains(&Method::Mts) {
        for m in methods.iter().copied().filter(|m| m.is_quantum_seeded()) {
            match log_ratio_gap(&grid, m, Method::Mts, config.bootstrap, mode) {
                Ok(g) => gaps.extend(g),
                Err(Error::InsufficientData(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        quantile_definition: "linear_interpolation".into(),
        analysis: config.clone(),
        config: echo,
        censoring: grid.notes,
        replicate_medians,
        quantiles,
        fits,
        crossover,
        gaps,
    })
}

fn write_table<T: Serialize>(path: &Path, comment: &str, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    for line in comment.lines() {
        writeln!(file, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(file);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct FitRow {
    method: Method,
    p: f64,
    alpha: f64,
    beta: f64,
    kappa: f64,
    kappa_median: f64,
    kappa_lower: f64,
    kappa_upper: f64,
    r_squared: f64,
    r_squared_lower: f64,
    r_squared_upper: f64,
}

#[derive(Serialize)]
struct FitLineRow {
    method: Method,
    p: f64,
    n: usize,
    fitted: f64,
}

#[derive(Serialize)]
struct GapRow {
    n: usize,
    method_a: Method,
    method_b: Method,
    draw: usize,
    gap: f64,
}

#[derive(Serialize)]
struct CrossoverRow {
    draw: usize,
    n_cross: f64,
}

/// Writes `scatter.csv`, `quantiles.csv`, `fits.csv`, `fit_lines.csv`,
/// `gap.csv` and `crossover.csv` into `dir`, each preceded by `comment`
/// lines prefixed with `#`.
pub fn write_csv_bundle(report: &Report, dir: &Path, comment: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_table(&dir.join("scatter.csv"), comment, &report.replicate_medians)?;
    write_table(&dir.join("quantiles.csv"), comment, &report.quantiles)?;
    write_table(
        &dir.join("fits.csv"),
        comment,
        report.fits.iter().map(|f| FitRow {
            method: f.method,
            p: f.p,
            alpha: f.point.alpha,
            beta: f.point.beta,
            kappa: f.point.kappa,
            kappa_median: f.kappa.median,
            kappa_lower: f.kappa.lower,
            kappa_upper: f.kappa.upper,
            r_squared: f.point.r_squared,
            r_squared_lower: f.r_squared.lower,
            r_squared_upper: f.r_squared.upper,
        }),
    )?;
    let mut lines = Vec::new();
    for f in &report.fits {
        let ns = report.quantiles.iter().filter(|q| q.method == f.method && q.p == f.p).map(|q| q.n);
        let in_range = |n: &usize| report.analysis.fit_range.is_none_or(|(lo, hi)| lo <= *n && *n <= hi);
        for n in ns.filter(in_range) {
            lines.push(FitLineRow { method: f.method, p: f.p, n, fitted: f.point.predict(n as f64) });
        }
    }
    write_table(&dir.join("fit_lines.csv"), comment, lines)?;
    write_table(
        &dir.join("gap.csv"),
        comment,
        report.gaps.iter().flat_map(|g| {
            g.draws.iter().enumerate().map(move |(draw, &gap)| GapRow {
                n: g.n,
                method_a: g.method_a,
                method_b: g.method_b,
                draw,
                gap,
            })
        }),
    )?;
    let crossover_rows = report
        .crossover
        .iter()
        .flat_map(|c| c.draws.iter().enumerate().map(|(draw, &n_cross)| CrossoverRow { draw, n_cross }));
    write_table(&dir.join("crossover.csv"), comment, crossover_rows)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::synthetic::SyntheticSpec;

    fn dataset() -> TTSDataset {
        let mut recs = SyntheticSpec::default().generate(1);
        recs.extend(SyntheticSpec { method: Method::Qemts, kappa: 1.2, ..SyntheticSpec::default() }.generate(2));
        TTSDataset::from_records(recs).unwrap()
    }

    #[test]
    fn report_contents() {
        let cfg = AnalysisConfig { bootstrap: 100, seed: 3, ..AnalysisConfig::default() };
        let report = analyze(&dataset(), &cfg, serde_json::json!({"k": 1})).unwrap();
        assert_eq!(report.fits.len(), 2 * 3);
        assert!(report.crossover.is_some());
        assert_eq!(report.gaps.len(), 11);
        assert_eq!(report.replicate_medians.len(), 2 * 11 * 10);
        // Crossover levels are summarized alongside the requested ones.
        assert!(report.quantiles.iter().any(|q| q.p == 0.95));
        let again = analyze(&dataset(), &cfg, serde_json::json!({"k": 1})).unwrap();
        assert_eq!(serde_json::to_string(&report).unwrap(), serde_json::to_string(&again).unwrap());
    }

    #[test]
    fn csv_bundle_files() {
        let cfg = AnalysisConfig { bootstrap: 20, ..AnalysisConfig::default() };
        let report = analyze(&dataset(), &cfg, serde_json::Value::Null).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_csv_bundle(&report, dir.path(), "config {}").unwrap();
        for f in ["scatter", "quantiles", "fits", "fit_lines", "gap", "crossover"] {
            let text = std::fs::read_to_string(dir.path().join(format!("{f}.csv"))).unwrap();
            let mut lines = text.lines();
            assert_eq!(lines.next(), Some("# config {}"));
            assert!(lines.next().is_some(), "{f} has a header");
        }
        let fits = std::fs::read_to_string(dir.path().join("fits.csv")).unwrap();
        assert!(fits.lines().nth(1).unwrap().starts_with("method,p,alpha,beta,kappa"));
    }

    #[test]
    fn mts_only_dataset() {
        let ds = TTSDataset::from_records(SyntheticSpec::default().generate(4)).unwrap();
        let cfg = AnalysisConfig { bootstrap: 10, ..AnalysisConfig::default() };
        let report = analyze(&ds, &cfg, serde_json::Value::Null).unwrap();
        assert!(report.crossover.is_none());
        assert!(report.gaps.is_empty());
        let bad = AnalysisConfig { quantiles: vec![1.5], ..cfg };
        assert!(analyze(&ds, &bad, serde_json::Value::Null).is_err());
    }
}
