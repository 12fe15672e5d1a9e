use serde::{Deserialize, Serialize};

use super::bootstrap::{bootstrap_draws, fit_quantile, point_medians, FitRange, Interval, ResampleMode};
use super::dataset::TtsGrid;
use super::fit::FitResult;
use super::quantile::quantile_sorted;
use crate::error::{Error, Result};
use crate::search::Method;

/// Length where line `a` meets line `b`: `(alpha_b - alpha_a) / (beta_a - beta_b)`.
pub fn crossover(fit_a: &FitResult, fit_b: &FitResult) -> Result<f64> {
    let slope_gap = fit_a.beta - fit_b.beta;
    if slope_gap == 0.0 {
        return Err(Error::NoCrossover);
    }
    Ok((fit_b.alpha - fit_a.alpha) / slope_gap)
}

/// Which fitted quantile line plays each role.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverSpec {
    pub method_a: Method,
    pub p_a: f64,
    pub method_b: Method,
    pub p_b: f64,
}

impl Default for CrossoverSpec {
    /// Upper QE-MTS quantile against lower MTS quantile.
    fn default() -> Self {
        Self { method_a: Method::Qemts, p_a: 0.95, method_b: Method::Mts, p_b: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossoverEstimate {
    pub spec: CrossoverSpec,
    pub point: Option<f64>,
    /// Finite per-draw values; draws with equal slopes are counted separately.
    pub draws: Vec<f64>,
    pub undefined_draws: usize,
    pub interval: Option<Interval>,
}

pub fn crossover_distribution(
    grid: &TtsGrid,
    spec: CrossoverSpec,
    draws: usize,
    range: FitRange,
    mode: ResampleMode,
) -> Result<CrossoverEstimate> {
    let per = |meds: &_| -> Result<Option<f64>> {
        let a = fit_quantile(meds, spec.method_a, spec.p_a, range)?;
        let b = fit_quantile(meds, spec.method_b, spec.p_b, range)?;
        match crossover(&a, &b) {
            Ok(x) => Ok(Some(x)),
            Err(Error::NoCrossover) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let point = per(&point_medians(grid))?;
    let all = bootstrap_draws(grid, mode, draws, per).into_iter().collect::<Result<Vec<_>>>()?;
    let finite: Vec<f64> = all.iter().flatten().copied().collect();
    let interval = if finite.is_empty() { None } else { Some(Interval::from_draws(&finite)?) };
    Ok(CrossoverEstimate { spec, point, undefined_draws: all.len() - finite.len(), draws: finite, interval })
}

/// Per-N distribution of `log10(median-of-medians a) - log10(median-of-medians b)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapDistribution {
    pub n: usize,
    pub method_a: Method,
    pub method_b: Method,
    pub point: f64,
    pub interval: Interval,
    pub draws: Vec<f64>,
}

pub fn log_ratio_gap(
    grid: &TtsGrid,
    method_a: Method,
    method_b: Method,
    draws: usize,
    mode: ResampleMode,
) -> Result<Vec<GapDistribution>> {
    let la = grid.lengths(method_a);
    let lb = grid.lengths(method_b);
    if la.is_empty() || lb.is_empty() {
        return Err(Error::InsufficientData(format!("gap needs both {method_a} and {method_b}")));
    }
    let shared: Vec<usize> = la.into_iter().filter(|n| lb.contains(n)).collect();
    if shared.is_empty() {
        return Err(Error::InsufficientData(format!("{method_a} and {method_b} share no N")));
    }
    let gaps = |meds: &super::bootstrap::DrawMedians| -> Vec<f64> {
        shared
            .iter()
            .map(|&n| {
                let mm = |m| quantile_sorted(&meds[&(m, n)], 0.5).log10();
                mm(method_a) - mm(method_b)
            })
            .collect()
    };
    let point = gaps(&point_medians(grid));
    let per_draw = bootstrap_draws(grid, mode, draws, gaps);
    shared
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let d: Vec<f64> = per_draw.iter().map(|g| g[i]).collect();
            Ok(GapDistribution {
                n,
                method_a,
                method_b,
                point: point[i],
                interval: Interval::from_draws(&d)?,
                draws: d,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::dataset::{CensoringPolicy, TTSDataset};
    use crate::stats::synthetic::SyntheticSpec;

    fn fit(alpha: f64, beta: f64) -> FitResult {
        FitResult { alpha, beta, kappa: beta.exp(), r_squared: 1.0, n_points: 2, degenerate: false }
    }

    #[test]
    fn formula_examples() {
        let x = crossover(&fit(2.0, 1.24f64.ln()), &fit(1.0, 1.34f64.ln())).unwrap();
        let expected = (1.0 - 2.0) / (1.24f64.ln() - 1.34f64.ln());
        assert!((x - expected).abs() < 1e-12);
        assert!((x - 12.894).abs() < 1e-3);
        assert_eq!(crossover(&fit(1.5, 0.2), &fit(1.5, 0.3)).unwrap(), 0.0);
        let f = fit(1.0, 0.3);
        assert!(matches!(crossover(&f, &f), Err(Error::NoCrossover)));
    }

    fn two_methods(qemts: SyntheticSpec, mts: SyntheticSpec, seed: u64) -> TtsGrid {
        let mut recs = mts.generate(seed);
        recs.extend(qemts.generate(seed + 1));
        TtsGrid::build(&TTSDataset::from_records(recs).unwrap(), CensoringPolicy::default())
    }

    #[test]
    fn identical_methods_give_zero_gap_and_no_crossover() {
        let base = SyntheticSpec { replicate_sigma: 0.0, seed_sigma: 0.0, ..SyntheticSpec::default() };
        let q = SyntheticSpec { method: Method::Qemts, ..base.clone() };
        let grid = two_methods(q, base, 1);
        let gaps = log_ratio_gap(&grid, Method::Qemts, Method::Mts, 50, ResampleMode::Random { seed: 1 }).unwrap();
        assert!(gaps.iter().all(|g| g.draws.iter().all(|&d| d == 0.0)));
        let spec = CrossoverSpec { p_a: 0.5, p_b: 0.5, ..CrossoverSpec::default() };
        let est = crossover_distribution(&grid, spec, 20, None, ResampleMode::Identity).unwrap();
        assert_eq!(est.point, None);
        assert_eq!(est.undefined_draws, 20);
        assert!(est.interval.is_none());
    }

    #[test]
    fn tenfold_gap_is_one() {
        let base = SyntheticSpec { replicate_sigma: 0.0, seed_sigma: 0.0, ..SyntheticSpec::default() };
        let q = SyntheticSpec { method: Method::Qemts, alpha: base.alpha + 10f64.ln(), ..base.clone() };
        let grid = two_methods(q, base, 2);
        let gaps = log_ratio_gap(&grid, Method::Qemts, Method::Mts, 10, ResampleMode::Random { seed: 3 }).unwrap();
        for g in gaps {
            // Rounding to integer evaluation counts perturbs the ratio slightly.
            assert!((g.point - 1.0).abs() < 1e-3, "n={} gap={}", g.n, g.point);
        }
    }

    #[test]
    fn crossing_methods_change_gap_sign() {
        let mts = SyntheticSpec { kappa: 1.4, alpha: 100f64.ln(), ..SyntheticSpec::default() };
        let q = SyntheticSpec {
            method: Method::Qemts,
            kappa: 1.2,
            alpha: 100f64.ln() + 15.0 * (1.4f64.ln() - 1.2f64.ln()),
            ..mts.clone()
        };
        let grid = two_methods(q, mts, 5);
        let gaps = log_ratio_gap(&grid, Method::Qemts, Method::Mts, 200, ResampleMode::Random { seed: 8 }).unwrap();
        assert!(gaps.first().unwrap().interval.median > 0.0);
        assert!(gaps.last().unwrap().interval.median < 0.0);
        let spec = CrossoverSpec { p_a: 0.5, p_b: 0.5, ..CrossoverSpec::default() };
        let est = crossover_distribution(&grid, spec, 200, None, ResampleMode::Random { seed: 8 }).unwrap();
        let iv = est.interval.unwrap();
        assert!(iv.contains(15.0), "{iv:?}");
    }
}
