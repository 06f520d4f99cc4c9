//! Decaying solutions of `3u'' = y u - 24|u|^2 u` matched to `κ Ai(3^{-1/3} y)` on the right.
//!
//! The equation is phase covariant, so the solver works with a real profile and
//! rotates by the phase of `κ`. The right tail is fixed by the linearization; the
//! profile is then continued leftward by an implicit Numerov recursion with a
//! damped scalar Newton solve per node. Leftward the growing Airy mode `Bi`
//! decays, so no left closure is needed and the left edge does not feed back.

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::interp::UniformCubic;
use crate::special::airy_ai;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type C = Complex64;

/// `3^{-1/3}`.
pub const AIRY_SCALE: f64 = 0.693_361_274_350_634_7;

/// Amplitude at which the profile is declared blown up.
pub const BLOW_UP_AMPLITUDE: f64 = 1e6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PainleveConfig {
    pub y_min: f64,
    pub y_max: f64,
    pub n: usize,
    pub max_newton_iters: usize,
    pub tol: f64,
}

impl Default for PainleveConfig {
    fn default() -> Self {
        Self { y_min: -15.0, y_max: 20.0, n: 16001, max_newton_iters: 50, tol: 1e-14 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PainleveSolution {
    pub ys: Vec<f64>,
    pub up: Vec<C>,
    /// Modulus of the matching amplitude; the phase is carried by `up`.
    pub kappa: f64,
    /// Largest interior residual of `3u'' - yu + 24|u|^2 u` with a sixth-order second difference.
    pub residual_max: f64,
}

impl PainleveSolution {
    /// Cubic interpolation; zero outside the grid.
    pub fn eval(&self, y: f64) -> C {
        let dy = self.ys[1] - self.ys[0];
        UniformCubic::new(self.ys[0], dy, &self.up).eval(y)
    }

    /// `∫|3u'' - yu + 24|u|^2 u|^2 dy` over the interior points.
    pub fn residual_l2(&self) -> f64 {
        let h = self.ys[1] - self.ys[0];
        interior_residuals(&self.ys, &self.up).map(|r| r * r * h).sum()
    }
}

/// `Ai(y)` for real `y`; series near the origin, asymptotic expansions in the tails.
pub fn airy_reference(y: f64) -> f64 {
    airy_ai(y)
}

/// Linearized profile `κ Ai(3^{-1/3} y)`.
pub fn linear_profile(kappa: f64, y: f64) -> f64 {
    kappa * airy_ai(AIRY_SCALE * y)
}

fn interior_residuals<'a>(ys: &'a [f64], up: &'a [C]) -> impl Iterator<Item = f64> + 'a {
    let h = ys[1] - ys[0];
    let n = up.len();
    // sixth-order central stencil for the second derivative
    const W: [f64; 4] = [-49.0 / 18.0, 1.5, -0.15, 1.0 / 90.0];
    (3..n.saturating_sub(3)).map(move |i| {
        let mut d2 = up[i] * W[0];
        for (m, w) in W.iter().enumerate().skip(1) {
            d2 += (up[i + m] + up[i - m]) * *w;
        }
        d2 /= h * h;
        (d2 * 3.0 - up[i] * ys[i] + up[i] * (24.0 * up[i].norm_sqr())).norm()
    })
}

/// Solves with the default Newton settings.
pub fn solve_painleve(kappa: f64, y_min: f64, y_max: f64, n: usize) -> Result<PainleveSolution> {
    solve_painleve_with(C::new(kappa, 0.0), &PainleveConfig { y_min, y_max, n, ..Default::default() })
}

/// Solves for complex `κ` by rotating the real solution of amplitude `|κ|`.
pub fn solve_painleve_with(kappa: C, cfg: &PainleveConfig) -> Result<PainleveSolution> {
    if !(cfg.y_max > cfg.y_min) || cfg.n < 8 {
        return Err(Error::InvalidGrid(format!("need y_min < y_max and n >= 8, got [{}, {}], n = {}", cfg.y_min, cfg.y_max, cfg.n)));
    }
    if !kappa.re.is_finite() || !kappa.im.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite kappa {kappa}")));
    }
    let amp = kappa.norm();
    let phase = if amp > 0.0 { kappa / amp } else { C::new(1.0, 0.0) };
    let n = cfg.n;
    let h = (cfg.y_max - cfg.y_min) / (n - 1) as f64;
    let ys: Vec<f64> = (0..n).map(|i| cfg.y_min + i as f64 * h).collect();
    let tail = linear_profile(amp, cfg.y_max);
    if tail > 1e-10 {
        log::warn!("right edge amplitude {tail:e} is not in the linear regime; increase y_max");
    }
    let mut u = vec![0.0; n];
    u[n - 1] = linear_profile(amp, ys[n - 1]);
    u[n - 2] = linear_profile(amp, ys[n - 2]);
    let c = h * h / 12.0;
    let f = |v: f64, y: f64| (y * v - 24.0 * v * v * v) / 3.0;
    for i in (1..n - 1).rev() {
        let rhs = 2.0 * u[i] - u[i + 1] + c * (f(u[i + 1], ys[i + 1]) + 10.0 * f(u[i], ys[i]));
        let y = ys[i - 1];
        // g(v) = v - c f(v, y) - rhs
        let g = |v: f64| v - c * f(v, y) - rhs;
        let mut v = 2.0 * u[i] - u[i + 1];
        let mut converged = false;
        for _ in 0..cfg.max_newton_iters {
            let gv = g(v);
            let dg = 1.0 - c * (y - 72.0 * v * v) / 3.0;
            let mut step = gv / dg;
            let mut trial = v - step;
            let mut halvings = 0;
            while g(trial).abs() > gv.abs() && halvings < 30 {
                step *= 0.5;
                trial = v - step;
                halvings += 1;
            }
            v = trial;
            if step.abs() <= cfg.tol * v.abs() || gv == 0.0 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { iterations: cfg.max_newton_iters });
        }
        if !v.is_finite() || v.abs() > BLOW_UP_AMPLITUDE {
            return Err(Error::BlowUp { y });
        }
        u[i - 1] = v;
    }
    let up: Vec<C> = u.iter().map(|&v| phase * v).collect();
    let residual_max = interior_residuals(&ys, &up).fold(0.0, f64::max);
    Ok(PainleveSolution { ys, up, kappa: amp, residual_max })
}

/// Fitted amplitude of the self-similar tail of small-amplitude runs.
#[derive(Debug, Clone, Serialize)]
pub struct KappaFit {
    pub kappa: C,
    /// Fit of each run separately, in input order.
    pub per_run: Vec<C>,
    /// Pooled `‖w - κ A‖ / ‖w‖` over all runs.
    pub relative_residual: f64,
    /// `max |κ_run - κ| / |κ|`.
    pub spread: f64,
}

/// Window of the linear tail used by the fit.
pub const FIT_WINDOW: (f64, f64) = (2.0, 5.0);
const FIT_SAMPLES: usize = 61;

/// Least-squares `κ` with `t^{1/3} u(y t^{1/3}, t) ≈ κ Ai(3^{-1/3} y)` for `y` in [`FIT_WINDOW`].
pub fn match_kappa_from_pde(runs: &[(f64, ComplexField)]) -> Result<KappaFit> {
    if runs.is_empty() {
        return Err(Error::InvalidInput("no runs to fit".into()));
    }
    let ys: Vec<f64> = (0..FIT_SAMPLES)
        .map(|i| FIT_WINDOW.0 + (FIT_WINDOW.1 - FIT_WINDOW.0) * i as f64 / (FIT_SAMPLES - 1) as f64)
        .collect();
    let model: Vec<f64> = ys.iter().map(|&y| airy_ai(AIRY_SCALE * y)).collect();
    let aa: f64 = model.iter().map(|a| a * a).sum();
    let mut per_run = Vec::with_capacity(runs.len());
    let mut samples = Vec::with_capacity(runs.len());
    for (t, field) in runs {
        if *t <= 0.0 {
            return Err(Error::NonpositiveTime { t: *t });
        }
        let s = t.cbrt();
        let interp = UniformCubic::new(field.xmin(), field.dx(), &field.values);
        let w: Vec<C> = ys
            .iter()
            .map(|&y| {
                let x = y * s;
                if x > field.xmax() {
                    log::warn!("fit abscissa {x} beyond the grid at t = {t}");
                }
                interp.eval(x) * s
            })
            .collect();
        let wa: C = w.iter().zip(&model).map(|(v, a)| v * a).sum();
        per_run.push(wa / aa);
        samples.push(w);
    }
    let wa: C = samples.iter().flat_map(|w| w.iter().zip(&model).map(|(v, a)| v * a)).sum();
    let kappa = wa / (aa * runs.len() as f64);
    let signal: f64 = samples.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if signal == 0.0 {
        return Ok(KappaFit { kappa: C::new(0.0, 0.0), per_run, relative_residual: 0.0, spread: 0.0 });
    }
    let resid: f64 = samples
        .iter()
        .flat_map(|w| w.iter().zip(&model).map(|(v, a)| (v - kappa * a).norm_sqr()))
        .sum::<f64>()
        .sqrt();
    let relative_residual = resid / signal;
    if relative_residual > 0.1 {
        return Err(Error::FitDegenerate { relative_residual });
    }
    let spread = per_run.iter().map(|k| (k - kappa).norm() / kappa.norm()).fold(0.0, f64::max);
    Ok(KappaFit { kappa, per_run, relative_residual, spread })
}
