use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ln Q = alpha + beta N`, with `kappa = exp(beta)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    pub r_squared: f64,
    pub n_points: usize,
    /// True when `ln Q` has zero variance, so `R²` is reported as 0.
    #[serde(default)]
    pub degenerate: bool,
}

impl FitResult {
    pub fn predict(&self, n: f64) -> f64 {
        (self.alpha + self.beta * n).exp()
    }
}

/// Ordinary least squares of `ln Q` on `N`.
pub fn loglinear_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if let Some(&(n, q)) = points.iter().find(|&&(_, q)| !(q > 0.0 && q.is_finite())) {
        return Err(Error::InvalidInput(format!("nonpositive or non-finite Q = {q} at N = {n}")));
    }
    let first = points.first().ok_or(Error::InsufficientData("no fit points".into()))?.0;
    if points.iter().all(|&(n, _)| n == first) {
        return Err(Error::InsufficientData("fit needs at least two distinct N".into()));
    }
    let m = points.len() as f64;
    let ys: Vec<f64> = points.iter().map(|&(_, q)| q.ln()).collect();
    if ys.iter().all(|&y| y == ys[0]) {
        return Ok(FitResult {
            alpha: ys[0],
            beta: 0.0,
            kappa: 1.0,
            r_squared: 0.0,
            n_points: points.len(),
            degenerate: true,
        });
    }
    let x_mean = points.iter().map(|p| p.0).sum::<f64>() / m;
    let y_mean = ys.iter().sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&(x, _), &y) in points.iter().zip(&ys) {
        let (dx, dy) = (x - x_mean, y - y_mean);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let beta = sxy / sxx;
    let alpha = y_mean - beta * x_mean;
    let ss_res: f64 = points
        .iter()
        .zip(&ys)
        .map(|(&(x, _), &y)| (y - alpha - beta * x).powi(2))
        .sum();
    Ok(FitResult {
        alpha,
        beta,
        kappa: beta.exp(),
        r_squared: (1.0 - ss_res / syy).clamp(0.0, 1.0),
        n_points: points.len(),
        degenerate: false,
    })
}
