//! Least-squares fit of power laws `v ≈ A t^p` in log-log coordinates.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for two points.
    pub stderr: f64,
    /// Half-width of the 95% confidence interval of the slope (Student t).
    pub ci95: f64,
    pub n: usize,
}

/// Two-sided 97.5% Student t quantiles for 1..=30 degrees of freedom.
const T975: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160, 2.145, 2.131,
    2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
];

fn t_quantile(dof: usize) -> f64 {
    match dof {
        0 => f64::INFINITY,
        1..=30 => T975[dof - 1],
        _ => 1.96,
    }
}

/// Fits `ln v = slope · ln t + intercept`; needs at least two positive pairs.
pub fn fit_loglog(ts: &[f64], vs: &[f64]) -> Result<LogLogFit> {
    if ts.len() != vs.len() || ts.len() < 2 {
        return Err(Error::InvalidInput(format!("need >= 2 matched samples, got {} and {}", ts.len(), vs.len())));
    }
    if ts.iter().chain(vs).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidInput("log-log fit needs positive finite samples".into()));
    }
    let n = ts.len();
    let lx: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n as f64;
    let my = ly.iter().sum::<f64>() / n as f64;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("log-log fit needs distinct abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (stderr, ci95) = if n > 2 {
        let ss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        let se = (ss / (n - 2) as f64 / sxx).sqrt();
        (se, se * t_quantile(n - 2))
    } else {
        (0.0, 0.0)
    };
    Ok(LogLogFit { slope, intercept, stderr, ci95, n })
}
