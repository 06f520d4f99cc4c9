//! Transition data, discrete spectrum and norming constants from a decaying profile.
//!
//! The spatial Lax system `Ψ_x = -ik[σ, Ψ] + UΨ` with `σ = diag(1, 1, -1)` and
//! `U = [[0, 0, u], [0, 0, ū], [-ū, -u, 0]]` is integrated column by column; each
//! column only couples to its own exponential rate, so growing and decaying
//! columns never share a step-size controller.

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::interp::{cubic_on_grid, UniformCubic};
use crate::linalg::{adj2, det2, row_mul2, Mat2, Mat3, C};
use crate::ode::{integrate, OdeTolerance, State};
use crate::registry::Registry;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const SIGMA: [f64; 3] = [1.0, 1.0, -1.0];

fn c0() -> C {
    C::new(0.0, 0.0)
}

/// Which edge the Jost solution is normalized at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    FromMinusInf,
    FromPlusInf,
}

/// Integration and edge-decay settings.
#[derive(Debug, Clone, Copy)]
pub struct JostConfig {
    /// Tolerance for transition data on the real grid.
    pub tol: OdeTolerance,
    /// Tighter tolerance for Newton refinement and finite-difference derivatives.
    pub refine_tol: OdeTolerance,
    /// Maximum admissible `|u|` at the grid edges.
    pub edge_threshold: f64,
    /// Turn the edge warning into a `NonDecayingProfile` error.
    pub strict_edges: bool,
}

impl Default for JostConfig {
    fn default() -> Self {
        Self {
            tol: OdeTolerance::default(),
            refine_tol: OdeTolerance { atol: 1e-13, rtol: 1e-13, ..OdeTolerance::default() },
            edge_threshold: 1e-10,
            strict_edges: false,
        }
    }
}

/// Checks decay at the grid edges; warns unless `strict_edges` is set.
pub fn check_edges(field: &ComplexField, cfg: &JostConfig) -> Result<()> {
    let edge = field.edge_amplitude();
    if edge > cfg.edge_threshold {
        if cfg.strict_edges {
            return Err(Error::NonDecayingProfile { edge, threshold: cfg.edge_threshold });
        }
        log::warn!("profile edge amplitude {edge:e} exceeds {:e}", cfg.edge_threshold);
    }
    Ok(())
}

/// Integrates the listed columns of the conjugated Jost system from `x_from` to `x_to`,
/// starting from the identity columns.
pub fn jost_columns(
    field: &ComplexField,
    k: C,
    cols: &[usize],
    x_from: f64,
    x_to: f64,
    tol: &OdeTolerance,
) -> Result<Vec<State>> {
    let interp = UniformCubic::new(field.xmin(), field.dx(), &field.values);
    let i = C::new(0.0, 1.0);
    let h0 = Some((field.dx() * 4.0).min((x_to - x_from).abs().max(1e-12)));
    cols.iter()
        .map(|&j| {
            let diag: [C; 3] = std::array::from_fn(|m| -i * k * (SIGMA[m] - SIGMA[j]));
            let rhs = |x: f64, y: &State| {
                let u = interp.eval(x);
                let ub = u.conj();
                [
                    diag[0] * y[0] + u * y[2],
                    diag[1] * y[1] + ub * y[2],
                    diag[2] * y[2] - ub * y[0] - u * y[1],
                ]
            };
            let mut y0 = [c0(); 3];
            y0[j] = C::new(1.0, 0.0);
            integrate(rhs, x_from, x_to, y0, h0, tol)
                .map(|(y, _)| y)
                .map_err(|fail| Error::StepFailure { x: fail.x, k })
        })
        .collect()
}

fn columns_to_matrix(cols: &[State]) -> Mat3 {
    let mut m = [[c0(); 3]; 3];
    for (j, col) in cols.iter().enumerate() {
        for r in 0..3 {
            m[r][j] = col[r];
        }
    }
    m
}

/// Jost solution `Ψ_±(k)` evaluated at the far grid edge, normalized to `I` at the start edge.
pub fn jost_integrate(field: &ComplexField, k: C, direction: Direction, cfg: &JostConfig) -> Result<Mat3> {
    check_edges(field, cfg)?;
    let (from, to) = match direction {
        Direction::FromMinusInf => (field.xmin(), field.xmax()),
        Direction::FromPlusInf => (field.xmax(), field.xmin()),
    };
    let cols = jost_columns(field, k, &[0, 1, 2], from, to, &cfg.tol)?;
    Ok(columns_to_matrix(&cols))
}

/// `(a(k), b(k))` from the first two columns of `Ψ_-` at the right edge.
///
/// Valid on the real axis and, for `a`, throughout the upper half-plane.
pub fn transition_at(field: &ComplexField, k: C, tol: &OdeTolerance) -> Result<(Mat2, [C; 2])> {
    let xe = field.xmax();
    let cols = jost_columns(field, k, &[0, 1], field.xmin(), xe, tol)?;
    let a = [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]];
    let phase = (C::new(0.0, -2.0) * k * xe).exp();
    let b = [cols[0][2] * phase, cols[1][2] * phase];
    Ok((a, b))
}

/// `det a(k)` for `k` in the closed upper half-plane.
pub fn det_a(field: &ComplexField, k: C, tol: &OdeTolerance) -> Result<C> {
    transition_at(field, k, tol).map(|(a, _)| det2(&a))
}

/// Sampled `a(k)` and `b(k)` on a real grid.
#[derive(Debug, Clone)]
pub struct TransitionData {
    pub k_grid: Vec<f64>,
    pub a_samples: Vec<Mat2>,
    pub b_samples: Vec<[C; 2]>,
    /// Grid indices whose integration failed; their samples are NaN.
    pub failures: Vec<(usize, String)>,
}

impl TransitionData {
    /// `γ(k_i) = b(k_i) a(k_i)^{-1}`.
    pub fn gamma(&self) -> Vec<[C; 2]> {
        self.a_samples
            .iter()
            .zip(&self.b_samples)
            .map(|(a, b)| {
                let d = det2(a);
                let g = row_mul2(b, &adj2(a));
                [g[0] / d, g[1] / d]
            })
            .collect()
    }

    /// Grid indices where `|det a(k)| < tol`.
    pub fn det_a_violations(&self, tol: f64) -> Vec<usize> {
        self.a_samples
            .iter()
            .enumerate()
            .filter(|(_, a)| det2(a).norm() < tol)
            .map(|(i, _)| i)
            .collect()
    }

    /// Maximum of `|a(k) - σ1 ā(-k) σ1|` and `|b(k) - b̄(-k) σ1|` over mirrored grid pairs.
    ///
    /// Returns `None` when the grid is not symmetric.
    pub fn symmetry_residual(&self) -> Option<(f64, f64)> {
        let n = self.k_grid.len();
        let scale = self.k_grid.iter().fold(1.0f64, |m, k| m.max(k.abs()));
        for i in 0..n {
            if (self.k_grid[i] + self.k_grid[n - 1 - i]).abs() > 1e-12 * scale {
                return None;
            }
        }
        let (mut ra, mut rb) = (0.0f64, 0.0f64);
        for i in 0..n {
            let (a, am) = (&self.a_samples[i], &self.a_samples[n - 1 - i]);
            for r in 0..2 {
                for c in 0..2 {
                    ra = ra.max((a[r][c] - am[1 - r][1 - c].conj()).norm());
                }
            }
            let (b, bm) = (&self.b_samples[i], &self.b_samples[n - 1 - i]);
            rb = rb.max((b[0] - bm[1].conj()).norm()).max((b[1] - bm[0].conj()).norm());
        }
        Some((ra, rb))
    }

    /// `max |det S(k) - 1|` over the grid, recomputing the full scattering matrix.
    pub fn det_s_residual(&self, field: &ComplexField, tol: &OdeTolerance) -> Result<f64> {
        let mut worst = 0.0f64;
        for &k in &self.k_grid {
            let s = scattering_matrix(field, C::new(k, 0.0), tol)?;
            worst = worst.max((det3(&s) - 1.0).norm());
        }
        Ok(worst)
    }
}

fn det3(m: &Mat3) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Full scattering matrix `S(k) = e^{ikxσ} Ψ_-(k; x) e^{-ikxσ}` at the right edge, `k` real.
pub fn scattering_matrix(field: &ComplexField, k: C, tol: &OdeTolerance) -> Result<Mat3> {
    let xe = field.xmax();
    let cols = jost_columns(field, k, &[0, 1, 2], field.xmin(), xe, tol)?;
    let psi = columns_to_matrix(&cols);
    let mut s = psi;
    for r in 0..3 {
        for c in 0..3 {
            s[r][c] = psi[r][c] * (C::new(0.0, 1.0) * k * xe * (SIGMA[r] - SIGMA[c])).exp();
        }
    }
    Ok(s)
}

/// Transition data on `k_grid`; grid points are processed in parallel.
///
/// Points whose integration fails are reported in `failures` with NaN samples.
pub fn compute_transition(field: &ComplexField, k_grid: &[f64], cfg: &JostConfig) -> Result<TransitionData> {
    check_edges(field, cfg)?;
    let results: Vec<Result<(Mat2, [C; 2])>> =
        k_grid.par_iter().map(|&k| transition_at(field, C::new(k, 0.0), &cfg.tol)).collect();
    let nan = C::new(f64::NAN, f64::NAN);
    let mut data = TransitionData {
        k_grid: k_grid.to_vec(),
        a_samples: Vec::with_capacity(k_grid.len()),
        b_samples: Vec::with_capacity(k_grid.len()),
        failures: vec![],
    };
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((a, b)) => {
                data.a_samples.push(a);
                data.b_samples.push(b);
            }
            Err(e) => {
                data.failures.push((i, e.to_string()));
                data.a_samples.push([[nan; 2]; 2]);
                data.b_samples.push([nan; 2]);
            }
        }
    }
    if !data.failures.is_empty() {
        log::warn!("{} of {} transition samples failed", data.failures.len(), k_grid.len());
    }
    Ok(data)
}

/// Rectangle `[re_min, re_max] x [im_min, im_max]` in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl SearchBox {
    pub fn contains(&self, k: C) -> bool {
        k.re >= self.re_min && k.re <= self.re_max && k.im >= self.im_min && k.im <= self.im_max
    }
}

/// Root-finding controls.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumOptions {
    pub seeds_re: usize,
    pub seeds_im: usize,
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Minimum admissible `|d det a / dk|` at a root.
    pub min_derivative: f64,
    /// Minimum admissible `Im k` of a root.
    pub min_imag: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { seeds_re: 7, seeds_im: 5, newton_tol: 1e-10, max_newton: 60, min_derivative: 1e-8, min_imag: 1e-3 }
    }
}

/// Five-point central difference of `f` at `k` along the real direction.
fn five_point(f: &impl Fn(C) -> Result<C>, k: C, h: f64) -> Result<C> {
    let hc = C::new(h, 0.0);
    let (f2p, f1p, f1m, f2m) = (f(k + hc * 2.0)?, f(k + hc)?, f(k - hc)?, f(k - hc * 2.0)?);
    Ok((-f2p + f1p * 8.0 - f1m * 8.0 + f2m) / (12.0 * h))
}

/// Derivative with step halving until consecutive estimates agree to 1e-9 relative.
pub fn derivative_adaptive(f: &impl Fn(C) -> Result<C>, k: C, h0: f64) -> Result<C> {
    let mut h = h0;
    let mut prev = five_point(f, k, h)?;
    for _ in 0..6 {
        h *= 0.5;
        let next = five_point(f, k, h)?;
        if (next - prev).norm() <= 1e-9 * next.norm().max(1e-300) {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// Number of zeros of `f` inside the box from the winding of `arg f` along the boundary.
pub fn winding_number(f: &impl Fn(C) -> Result<C>, bx: &SearchBox) -> Result<i64> {
    let corners = [
        C::new(bx.re_min, bx.im_min),
        C::new(bx.re_max, bx.im_min),
        C::new(bx.re_max, bx.im_max),
        C::new(bx.re_min, bx.im_max),
    ];
    let mut total = 0.0;
    for s in 0..4 {
        let (z0, z1) = (corners[s], corners[(s + 1) % 4]);
        let per_side = 16;
        let mut prev_z = z0;
        let mut prev_f = f(z0)?;
        for i in 1..=per_side {
            let z = z0 + (z1 - z0) * (i as f64 / per_side as f64);
            let fz = f(z)?;
            total += arg_increment(f, prev_z, prev_f, z, fz, 0)?;
            prev_z = z;
            prev_f = fz;
        }
    }
    let w = total / (2.0 * std::f64::consts::PI);
    let rounded = w.round();
    if (w - rounded).abs() > 0.1 {
        return Err(Error::RootCountMismatch { winding: rounded as i64, found: usize::MAX });
    }
    Ok(rounded as i64)
}

fn arg_increment(f: &impl Fn(C) -> Result<C>, za: C, fa: C, zb: C, fb: C, depth: usize) -> Result<f64> {
    if fa.norm() == 0.0 || fb.norm() == 0.0 {
        return Err(Error::DegenerateZero { k: if fa.norm() == 0.0 { za } else { zb }, derivative: 0.0 });
    }
    let d = (fb / fa).arg();
    if d.abs() <= 0.3 || depth >= 24 {
        return Ok(d);
    }
    let zm = (za + zb) * 0.5;
    let fm = f(zm)?;
    Ok(arg_increment(f, za, fa, zm, fm, depth + 1)? + arg_increment(f, zm, fm, zb, fb, depth + 1)?)
}

/// Simple zeros of `det a` inside `search_box`, Newton-refined to `|det a| < 1e-10`.
pub fn find_discrete_spectrum(field: &ComplexField, search_box: &SearchBox, cfg: &JostConfig) -> Result<Vec<C>> {
    find_discrete_spectrum_with(field, search_box, cfg, &SpectrumOptions::default())
}

pub fn find_discrete_spectrum_with(
    field: &ComplexField,
    bx: &SearchBox,
    cfg: &JostConfig,
    opts: &SpectrumOptions,
) -> Result<Vec<C>> {
    if !(bx.im_min >= 1e-3 && bx.im_max > bx.im_min && bx.re_max > bx.re_min) {
        return Err(Error::InvalidInput(format!("search box {bx:?} must lie in Im k >= 1e-3")));
    }
    check_edges(field, cfg)?;
    let f = |k: C| det_a(field, k, &cfg.refine_tol);
    let winding = winding_number(&f, bx)?;
    let scale = (bx.re_max - bx.re_min).max(bx.im_max - bx.im_min);
    let seeds: Vec<C> = (0..opts.seeds_re)
        .flat_map(|i| {
            (0..opts.seeds_im).map(move |j| {
                C::new(
                    bx.re_min + (i as f64 + 0.5) / opts.seeds_re as f64 * (bx.re_max - bx.re_min),
                    bx.im_min + (j as f64 + 0.5) / opts.seeds_im as f64 * (bx.im_max - bx.im_min),
                )
            })
        })
        .collect();
    let converged: Vec<Option<C>> = seeds
        .par_iter()
        .map(|&s| newton(&f, s, bx, scale, opts).ok().flatten())
        .collect();
    let mut roots: Vec<C> = vec![];
    for r in converged.into_iter().flatten() {
        if !roots.iter().any(|q| (q - r).norm() < 1e-6 * scale.max(1.0)) {
            roots.push(r);
        }
    }
    roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    if roots.len() as i64 != winding {
        return Err(Error::RootCountMismatch { winding, found: roots.len() });
    }
    for &r in &roots {
        let d = derivative_adaptive(&f, r, 1e-3 * r.im.max(1e-2))?;
        if d.norm() < opts.min_derivative || r.im < opts.min_imag {
            return Err(Error::DegenerateZero { k: r, derivative: d.norm() });
        }
    }
    Ok(roots)
}

fn newton(f: &impl Fn(C) -> Result<C>, seed: C, bx: &SearchBox, scale: f64, opts: &SpectrumOptions) -> Result<Option<C>> {
    let mut k = seed;
    let mut fk = f(k)?;
    for _ in 0..opts.max_newton {
        let h = 1e-5 * scale.max(1e-3);
        let hc = C::new(h, 0.0);
        let d = (f(k + hc)? - f(k - hc)?) / (2.0 * h);
        if d.norm() == 0.0 {
            return Ok(None);
        }
        let mut step = fk / d;
        let cap = 0.25 * scale;
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..8 {
            let cand = k - step * lambda;
            if cand.im <= 0.0 {
                lambda *= 0.5;
                continue;
            }
            let fc = f(cand)?;
            if fc.norm() < fk.norm() || fk.norm() < 1e-9 {
                k = cand;
                fk = fc;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Ok(None);
        }
        let margin = 1e-9 * scale;
        let inside = k.re >= bx.re_min - margin
            && k.re <= bx.re_max + margin
            && k.im >= bx.im_min - margin
            && k.im <= bx.im_max + margin;
        if !inside && (step * lambda).norm() < 1e-3 * scale {
            return Ok(None);
        }
        if fk.norm() < opts.newton_tol && (step * lambda).norm() < 1e-9 * scale.max(1.0) {
            return Ok(if inside { Some(k) } else { None });
        }
    }
    Ok(if fk.norm() < opts.newton_tol && bx.contains(k) { Some(k) } else { None })
}

/// A method for computing the norming constant `c_j` attached to a pole.
pub trait NormingMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn norming_constant(&self, field: &ComplexField, pole: C, cfg: &JostConfig) -> Result<[C; 2]>;
}

/// `c_j = b(k_j) adj a(k_j) / (det a)'(k_j)` without continuing `b` off the axis.
///
/// Uses the bound-state relation
/// `Ψ_-^{(12)}(k_j; x0) adj a(k_j) / (det a)'(k_j) = Ψ_+^{(3)}(k_j; x0) c_j e^{2ik_j x0}`
/// at an interior point `x0`, solved for `c_j` by least squares.
pub struct BoundStateConnection;

/// `c_j` from `b(k_j)` obtained by integrating the Jost system at complex `k_j`.
pub struct ContinuedTransition;

fn det_prime(field: &ComplexField, k: C, cfg: &JostConfig) -> Result<C> {
    let f = |z: C| det_a(field, z, &cfg.refine_tol);
    derivative_adaptive(&f, k, 1e-2 * k.im.clamp(0.05, 1.0))
}

impl NormingMethod for BoundStateConnection {
    fn name(&self) -> &'static str {
        "bound_state"
    }

    fn norming_constant(&self, field: &ComplexField, pole: C, cfg: &JostConfig) -> Result<[C; 2]> {
        let x0 = field
            .xs
            .iter()
            .zip(&field.values)
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .map(|(x, _)| *x)
            .unwrap();
        let tol = &cfg.refine_tol;
        let left = jost_columns(field, pole, &[0, 1], field.xmin(), x0, tol)?;
        let (a, _) = transition_at(field, pole, tol)?;
        let right = jost_columns(field, pole, &[2], field.xmax(), x0, tol)?[0];
        let dp = det_prime(field, pole, cfg)?;
        let adj = adj2(&a);
        // lhs = Ψ_-^{(12)}(x0) adj a / det'
        let mut lhs = [[c0(); 2]; 3];
        for r in 0..3 {
            for c in 0..2 {
                lhs[r][c] = (left[0][r] * adj[0][c] + left[1][r] * adj[1][c]) / dp;
            }
        }
        let pr_norm: f64 = right.iter().map(|v| v.norm_sqr()).sum();
        let mut c = [c0(); 2];
        for col in 0..2 {
            let s: C = (0..3).map(|r| right[r].conj() * lhs[r][col]).sum();
            c[col] = s / pr_norm;
        }
        let lhs_norm = lhs.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        let resid = (0..3)
            .flat_map(|r| (0..2).map(move |col| (r, col)))
            .map(|(r, col)| (lhs[r][col] - right[r] * c[col]).norm())
            .fold(0.0, f64::max);
        if resid > 1e-4 * lhs_norm {
            log::warn!("bound-state relation residual {resid:e} at pole {pole}");
        }
        let phase = (C::new(0.0, -2.0) * pole * x0).exp();
        Ok([c[0] * phase, c[1] * phase])
    }
}

/// Decay rate of `|u|` fitted on the outer 10% of each side (minimum of both sides).
///
/// Returns infinity when a side is identically zero.
pub fn edge_decay_rate(field: &ComplexField) -> f64 {
    let n = field.len();
    let m = (n / 10).max(3).min(n);
    let fit = |idx: Vec<usize>| -> f64 {
        let pts: Vec<(f64, f64)> = idx
            .iter()
            .filter(|&&i| field.values[i].norm() > 1e-300)
            .map(|&i| (field.xs[i].abs(), field.values[i].norm().ln()))
            .collect();
        if pts.len() < 3 {
            return f64::INFINITY;
        }
        let nf = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx == 0.0 {
            return f64::INFINITY;
        }
        -sxy / sxx
    };
    let left = fit((0..m).collect());
    let right = fit((n - m..n).collect());
    left.min(right)
}

impl NormingMethod for ContinuedTransition {
    fn name(&self) -> &'static str {
        "continued_b"
    }

    fn norming_constant(&self, field: &ComplexField, pole: C, cfg: &JostConfig) -> Result<[C; 2]> {
        let required = 2.0 * pole.im;
        let rate = edge_decay_rate(field);
        if !(rate > required * 1.05) {
            return Err(Error::ContinuationUnreliable { rate, required });
        }
        let (a, b) = transition_at(field, pole, &cfg.refine_tol)?;
        let dp = det_prime(field, pole, cfg)?;
        let g = row_mul2(&b, &adj2(&a));
        Ok([g[0] / dp, g[1] / dp])
    }
}

pub fn norming_registry() -> Registry<dyn NormingMethod> {
    let mut r: Registry<dyn NormingMethod> = Registry::new("norming");
    r.register("bound_state", || Box::new(BoundStateConnection));
    r.register("continued_b", || Box::new(ContinuedTransition));
    r
}

pub const DEFAULT_NORMING: &str = "bound_state";

/// Norming constants with the default bound-state method.
pub fn compute_norming_constants(field: &ComplexField, poles: &[C], cfg: &JostConfig) -> Result<Vec<[C; 2]>> {
    compute_norming_constants_with(field, poles, &BoundStateConnection, cfg)
}

pub fn compute_norming_constants_with(
    field: &ComplexField,
    poles: &[C],
    method: &dyn NormingMethod,
    cfg: &JostConfig,
) -> Result<Vec<[C; 2]>> {
    check_edges(field, cfg)?;
    poles.par_iter().map(|&k| method.norming_constant(field, k, cfg)).collect()
}

/// Poles, norming constants and the sampled reflection coefficient.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScatteringData {
    pub poles: Vec<C>,
    pub norming: Vec<[C; 2]>,
    pub gamma_k: Vec<f64>,
    pub gamma: Vec<[C; 2]>,
}

impl ScatteringData {
    pub fn reflectionless(poles: Vec<C>, norming: Vec<[C; 2]>) -> Self {
        Self { poles, norming, gamma_k: vec![], gamma: vec![] }
    }

    /// Checks the upper half-plane, distinctness, and `-k̄` closure of the pole set.
    pub fn validate(&self) -> Result<()> {
        if self.poles.len() != self.norming.len() {
            return Err(Error::InvalidInput(format!(
                "{} poles but {} norming constants",
                self.poles.len(),
                self.norming.len()
            )));
        }
        if self.gamma_k.len() != self.gamma.len() {
            return Err(Error::InvalidInput("gamma grid and samples differ in length".into()));
        }
        for (i, &k) in self.poles.iter().enumerate() {
            if !(k.im > 0.0) {
                return Err(Error::InvalidInput(format!("pole {k} not in the upper half-plane")));
            }
            if self.poles[..i].iter().any(|&q| (q - k).norm() < 1e-12) {
                return Err(Error::SystemSingular { condition: f64::INFINITY });
            }
            let partner = -k.conj();
            if !self.poles.iter().any(|&q| (q - partner).norm() < 1e-8 * k.norm().max(1.0)) {
                return Err(Error::InvalidInput(format!("pole set not closed under k -> -conj(k): missing {partner}")));
            }
        }
        Ok(())
    }

    /// `γ(k)` by piecewise-cubic interpolation, zero outside the sampled range.
    pub fn gamma_at(&self, k: f64) -> [C; 2] {
        if self.gamma_k.is_empty() || k < self.gamma_k[0] || k > *self.gamma_k.last().unwrap() {
            return [c0(); 2];
        }
        cubic_on_grid(&self.gamma_k, &self.gamma, k)
    }

    pub fn gamma_sup(&self) -> f64 {
        self.gamma.iter().map(|g| (g[0].norm_sqr() + g[1].norm_sqr()).sqrt()).fold(0.0, f64::max)
    }
}

/// The pole `-k̄` partner of a norming constant: `c ↦ -c̄ σ1`.
pub fn partner_norming(c: [C; 2]) -> [C; 2] {
    [-c[1].conj(), -c[0].conj()]
}

/// Scattering data: transition data on `k_grid`, zeros in `search_box`, and norming constants.
pub fn scatter(
    field: &ComplexField,
    k_grid: &[f64],
    search_box: &SearchBox,
    cfg: &JostConfig,
    method: &dyn NormingMethod,
) -> Result<(ScatteringData, TransitionData)> {
    let td = compute_transition(field, k_grid, cfg)?;
    let poles = find_discrete_spectrum(field, search_box, cfg)?;
    let norming = compute_norming_constants_with(field, &poles, method, cfg)?;
    let gamma = td.gamma();
    Ok((ScatteringData { poles, norming, gamma_k: k_grid.to_vec(), gamma }, td))
}

/// Uniform grid of `n` points on `[kmin, kmax]`.
pub fn uniform_k_grid(kmin: f64, kmax: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![kmin];
    }
    (0..n).map(|i| kmin + (kmax - kmin) * i as f64 / (n - 1) as f64).collect()
}
