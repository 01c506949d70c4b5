use crate::error::{BowtieError, Result};
use serde::{Deserialize, Serialize};

/// Least-squares line through `(log x, log y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: [f64; 2],
    pub n_points: usize,
}

/// Fits with a coefficient of determination below this are rejected.
pub const MIN_R_SQUARED: f64 = 0.999;

/// Ordinary least squares on log-log data without a quality gate.
pub fn fit_loglog(x: &[f64], y: &[f64]) -> Result<ExponentFit> {
    if x.len() != y.len() {
        return Err(BowtieError::Fit("abscissa and ordinate lengths differ".into()));
    }
    if x.len() < 5 {
        return Err(BowtieError::Fit(format!("need at least 5 points, got {}", x.len())));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(BowtieError::Fit("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx <= 1e-300 {
        return Err(BowtieError::Fit("degenerate abscissa".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx.iter().zip(&ly).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy <= 1e-300 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ExponentFit { slope, intercept, r_squared, window: [lo, hi], n_points: x.len() })
}

/// Log-log fit restricted to `window`, rejected when `r^2 < MIN_R_SQUARED`.
pub fn fit_exponent(x: &[f64], y: &[f64], window: Option<[f64; 2]>) -> Result<ExponentFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, _)| window.map_or(true, |w| **a >= w[0] * (1.0 - 1e-12) && **a <= w[1] * (1.0 + 1e-12)))
        .map(|(a, b)| (*a, *b))
        .unzip();
    let fit = fit_loglog(&xs, &ys)?;
    if fit.r_squared < MIN_R_SQUARED {
        return Err(BowtieError::Fit(format!("r^2 = {:.6} below {MIN_R_SQUARED}", fit.r_squared)));
    }
    Ok(fit)
}
