use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::TtsGrid;
use super::fit::{loglinear_fit, FitResult};
use super::quantile::{median_in_place, quantile, quantile_sorted};
use crate::error::{Error, Result};
use crate::rng;
use crate::search::Method;

/// How each bootstrap draw picks replicates and seeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMode {
    /// Draw `b` uses the stream derived from `(seed, b)`.
    Random { seed: u64 },
    /// Every draw keeps the data as-is; reproduces the point estimate.
    Identity,
}

/// Sorted replicate medians per `(method, N)` for one draw.
pub type DrawMedians = BTreeMap<(Method, usize), Vec<f64>>;

fn resample_medians<R: Rng>(grid: &TtsGrid, rng: Option<&mut R>) -> DrawMedians {
    let mut out = BTreeMap::new();
    match rng {
        None => {
            for (key, reps) in &grid.cells {
                let mut meds: Vec<f64> =
                    reps.iter().map(|(_, tts)| median_in_place(&mut tts.clone())).collect();
                meds.sort_by(f64::total_cmp);
                out.insert(*key, meds);
            }
        }
        Some(rng) => {
            let mut scratch = Vec::new();
            for (key, reps) in &grid.cells {
                let mut meds = Vec::with_capacity(reps.len());
                for _ in 0..reps.len() {
                    let tts = &reps[rng.random_range(0..reps.len())].1;
                    scratch.clear();
                    scratch.extend((0..tts.len()).map(|_| tts[rng.random_range(0..tts.len())]));
                    meds.push(median_in_place(&mut scratch));
                }
                meds.sort_by(f64::total_cmp);
                out.insert(*key, meds);
            }
        }
    }
    out
}

/// Two-stage resampling: replicates with replacement within each
/// `(N, method)`, then seeds with replacement within each chosen replicate.
/// Applies `summarize` to every draw in parallel; the output order (and,
/// for `Random`, every draw) is independent of the thread count.
pub fn bootstrap_draws<T, F>(grid: &TtsGrid, mode: ResampleMode, draws: usize, summarize: F) -> Vec<T>
where
    T: Send,
    F: Fn(&DrawMedians) -> T + Sync + Send,
{
    (0..draws as u64)
        .into_par_iter()
        .map(|b| match mode {
            ResampleMode::Identity => summarize(&resample_medians::<rand_chacha::ChaCha8Rng>(grid, None)),
            ResampleMode::Random { seed } => {
                let mut r = rng::stream(seed, &[b]);
                summarize(&resample_medians(grid, Some(&mut r)))
            }
        })
        .collect()
}

/// Point-estimate medians (no resampling).
pub fn point_medians(grid: &TtsGrid) -> DrawMedians {
    resample_medians::<rand_chacha::ChaCha8Rng>(grid, None)
}

/// Inclusive range of `N` used for fits.
pub type FitRange = Option<(usize, usize)>;

fn in_range(n: usize, range: FitRange) -> bool {
    range.is_none_or(|(lo, hi)| lo <= n && n <= hi)
}

/// Fits `ln Q_p` against `N` for one method on one draw.
pub fn fit_quantile(medians: &DrawMedians, method: Method, p: f64, range: FitRange) -> Result<FitResult> {
    let points: Vec<(f64, f64)> = medians
        .iter()
        .filter(|((m, n), _)| *m == method && in_range(*n, range))
        .map(|((_, n), meds)| (*n as f64, quantile_sorted(meds, p)))
        .collect();
    loglinear_fit(&points)
        .map_err(|e| Error::InsufficientData(format!("{method} at p = {p}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub median: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    /// Median with 2.5/97.5 percentile bounds.
    pub fn from_draws(draws: &[f64]) -> Result<Self> {
        Ok(Self {
            median: quantile(draws, 0.5)?,
            lower: quantile(draws, 0.025)?,
            upper: quantile(draws, 0.975)?,
        })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub method: Method,
    pub p: f64,
    pub point: FitResult,
    pub draws: usize,
    pub kappa: Interval,
    pub r_squared: Interval,
    pub kappa_draws: Vec<f64>,
    pub r_squared_draws: Vec<f64>,
    #[serde(skip_serializing, default)]
    pub alpha_draws: Vec<f64>,
    #[serde(skip_serializing, default)]
    pub beta_draws: Vec<f64>,
}

/// Bootstrap of the quantile fits for every method in the grid and every `p`.
pub fn two_stage_bootstrap(
    grid: &TtsGrid,
    draws: usize,
    quantile_ps: &[f64],
    range: FitRange,
    mode: ResampleMode,
) -> Result<Vec<BootstrapResult>> {
    if draws == 0 {
        return Err(Error::InvalidInput("bootstrap needs at least one draw".into()));
    }
    let targets: Vec<(Method, f64)> = grid
        .methods()
        .into_iter()
        .flat_map(|m| quantile_ps.iter().map(move |&p| (m, p)))
        .collect();
    if targets.is_empty() {
        return Err(Error::InsufficientData("no methods or quantiles to fit".into()));
    }
    let point = point_medians(grid);
    let points = targets
        .iter()
        .map(|&(m, p)| fit_quantile(&point, m, p, range))
        .collect::<Result<Vec<_>>>()?;
    let per_draw = bootstrap_draws(grid, mode, draws, |meds| {
        targets.iter().map(|&(m, p)| fit_quantile(meds, m, p, range)).collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    targets
        .iter()
        .zip(points)
        .enumerate()
        .map(|(t, (&(method, p), point))| {
            let col = |f: fn(&FitResult) -> f64| per_draw.iter().map(|d| f(&d[t])).collect::<Vec<_>>();
            let kappa_draws = col(|f| f.kappa);
            let r_squared_draws = col(|f| f.r_squared);
            Ok(BootstrapResult {
                method,
                p,
                point,
                draws,
                kappa: Interval::from_draws(&kappa_draws)?,
                r_squared: Interval::from_draws(&r_squared_draws)?,
                kappa_draws,
                r_squared_draws,
                alpha_draws: col(|f| f.alpha),
                beta_draws: col(|f| f.beta),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::dataset::{CensoringPolicy, TTSDataset};
    use crate::stats::synthetic::SyntheticSpec;

    #[test]
    fn identity_reproduces_point_fit() {
        let spec = SyntheticSpec { replicates: 6, seeds: 7, ..SyntheticSpec::default() };
        let ds = TTSDataset::from_records(spec.generate(3)).unwrap();
        let grid = TtsGrid::build(&ds, CensoringPolicy::default());
        let res = two_stage_bootstrap(&grid, 1, &[0.1, 0.5, 0.9], None, ResampleMode::Identity).unwrap();
        for r in &res {
            assert_eq!(r.kappa_draws, vec![r.point.kappa]);
            assert_eq!(r.r_squared.lower, r.point.r_squared);
        }
    }

    #[test]
    fn constant_data_has_zero_width() {
        let spec = SyntheticSpec {
            kappa: 1.0,
            replicate_sigma: 0.0,
            seed_sigma: 0.0,
            ..SyntheticSpec::default()
        };
        let ds = TTSDataset::from_records(spec.generate(1)).unwrap();
        let grid = TtsGrid::build(&ds, CensoringPolicy::default());
        let res = two_stage_bootstrap(&grid, 200, &[0.5], None, ResampleMode::Random { seed: 4 }).unwrap();
        assert_eq!((res[0].kappa.lower, res[0].kappa.upper), (1.0, 1.0));
        assert_eq!(res[0].kappa.width(), 0.0);
        assert!(res[0].point.degenerate);
    }

    #[test]
    fn draws_are_deterministic_and_quantiles_monotone() {
        let ds = TTSDataset::from_records(SyntheticSpec::default().generate(8)).unwrap();
        let grid = TtsGrid::build(&ds, CensoringPolicy::default());
        let mode = ResampleMode::Random { seed: 99 };
        let a = two_stage_bootstrap(&grid, 300, &[0.5], None, mode).unwrap();
        let b = two_stage_bootstrap(&grid, 300, &[0.5], None, mode).unwrap();
        assert_eq!(a, b);
        let ordered = bootstrap_draws(&grid, mode, 300, |meds| {
            meds.values().all(|m| {
                let q = |p| quantile_sorted(m, p);
                q(0.1) <= q(0.5) && q(0.5) <= q(0.9)
            })
        });
        assert!(ordered.into_iter().all(|ok| ok));
        let inside = &a[0];
        assert!(inside.kappa.lower <= inside.kappa.median && inside.kappa.median <= inside.kappa.upper);
    }

    #[test]
    fn fit_range_restricts_points() {
        let ds = TTSDataset::from_records(SyntheticSpec::default().generate(2)).unwrap();
        let grid = TtsGrid::build(&ds, CensoringPolicy::default());
        let meds = point_medians(&grid);
        let f = fit_quantile(&meds, Method::Mts, 0.5, Some((12, 14))).unwrap();
        assert_eq!(f.n_points, 3);
        assert!(fit_quantile(&meds, Method::Mts, 0.5, Some((12, 12))).is_err());
        assert!(two_stage_bootstrap(&grid, 0, &[0.5], None, ResampleMode::Identity).is_err());
    }
}
