//! Error norms, algebraic rate fits and oscillation diagnostics.

use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;

/// Default resolution of the grid-based diagnostics.
pub const DIAGNOSTIC_GRID: usize = 20_001;

/// `(int_{-1}^{1} |f - g|^p)^{1/p}`.
pub fn lp_error<F, G>(f: F, g: G, p: f64, quad: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if p.is_nan() || p <= 0.0 {
        return Err(Error::Domain(format!("p must be positive, got {p}")));
    }
    let rule = quad.rule()?;
    Ok(rule.integrate(|x| (f(x) - g(x)).abs().powf(p)).powf(1.0 / p))
}

/// Least-squares line through `(log x, log err)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

pub fn fit_rate(xs: &[f64], errs: &[f64]) -> Result<RateFit> {
    if xs.len() != errs.len() {
        return Err(Error::Domain(format!(
            "{} abscissae but {} errors",
            xs.len(),
            errs.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::Domain("a rate fit needs at least two points".into()));
    }
    if let Some(bad) = xs.iter().chain(errs).find(|v| !v.is_finite() || **v <= 0.0) {
        return Err(Error::Domain(format!("rate fit needs positive finite data, got {bad}")));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("rate fit needs at least two distinct abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(RateFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
        points_used: xs.len(),
    })
}

/// `n` uniform points on `[-1, 1]` with `x = 0` removed.
pub fn diagnostic_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![-1.0],
        _ => (0..n)
            .map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
            .filter(|&x| x != 0.0)
            .collect(),
    }
}

/// Largest `|x|` on the diagnostic grid where `|f - approx|` exceeds `threshold`.
pub fn gibbs_support_width<F, A>(f: F, approx: A, threshold: f64, grid_n: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
    A: Fn(f64) -> f64,
{
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::Domain(format!("threshold must be positive, got {threshold}")));
    }
    Ok(diagnostic_grid(grid_n)
        .into_iter()
        .filter(|&x| (f(x) - approx(x)).abs() > threshold)
        .map(f64::abs)
        .fold(0.0, f64::max))
}

/// How far `approx` leaves the band `[lo, hi]` on the diagnostic grid.
pub fn max_overshoot<A: Fn(f64) -> f64>(approx: A, lo: f64, hi: f64, grid_n: usize) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::Domain(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    Ok(diagnostic_grid(grid_n)
        .into_iter()
        .map(|x| {
            let y = approx(x);
            (y - hi).max(lo - y)
        })
        .fold(0.0, f64::max))
}
