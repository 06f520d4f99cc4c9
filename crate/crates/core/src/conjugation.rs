//! Conjugation data on the cut `[-k0, k0]`: `ν`, `X(k)`, `det δ(k)`, the matrix `δ(k)`
//! and the parabolic-cylinder coefficients of the local model at the phase points.

use crate::error::{Error, Result};
use crate::linalg::{commutator_norm2, expm2, logm2, Mat2, Mat3, C};
use crate::quadrature::{integrate, QuadOptions};
use crate::registry::Registry;
use crate::special::gamma;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

/// Distance from the cut below which evaluation is refused.
pub const CUT_MARGIN: f64 = 1e-8;

pub type GammaFn = Arc<dyn Fn(f64) -> [C; 2] + Send + Sync>;

fn norm_sq(g: &[C; 2]) -> f64 {
    g[0].norm_sqr() + g[1].norm_sqr()
}

/// `ν = -(1/2π) log(1 + |γ(k0)|^2)`.
pub fn compute_nu(gamma_at_k0: [C; 2]) -> f64 {
    -(norm_sq(&gamma_at_k0)).ln_1p() / (2.0 * PI)
}

/// Principal `Log((k - k0)/(k + k0))`, equal to `∫_{-k0}^{k0} dξ/(ξ - k)` off the cut.
pub fn log_mobius(k: C, k0: f64) -> C {
    ((k - k0) / (k + k0)).ln()
}

/// `ν`, `X` and `det δ` for a reflection coefficient and phase point `k0`.
#[derive(Clone)]
pub struct ConjugationScalars {
    pub k0: f64,
    pub nu: f64,
    gamma: GammaFn,
    log_k0: f64,
    pub quad: QuadOptions,
}

impl std::fmt::Debug for ConjugationScalars {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConjugationScalars").field("k0", &self.k0).field("nu", &self.nu).finish()
    }
}

impl ConjugationScalars {
    pub fn new(gamma: GammaFn, k0: f64) -> Result<Self> {
        if !(k0 > 0.0 && k0.is_finite()) {
            return Err(Error::InvalidInput(format!("phase point k0 = {k0} must be positive")));
        }
        let g0 = gamma(k0);
        Ok(Self {
            k0,
            nu: compute_nu(g0),
            log_k0: norm_sq(&g0).ln_1p(),
            gamma,
            quad: QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 4000 },
        })
    }

    pub fn gamma_at(&self, k: f64) -> [C; 2] {
        (self.gamma)(k)
    }

    /// `log((1 + |γ(ξ)|^2)/(1 + |γ(k0)|^2))`.
    fn log_ratio(&self, xi: f64) -> f64 {
        norm_sq(&(self.gamma)(xi)).ln_1p() - self.log_k0
    }

    fn on_cut(&self, k: C) -> bool {
        let re_out = (k.re.abs() - self.k0).max(0.0);
        re_out.hypot(k.im) < CUT_MARGIN
    }

    /// `X(k) = (1/2πi) ∫_{-k0}^{k0} log((1+|γ(ξ)|^2)/(1+|γ(k0)|^2)) dξ/(ξ - k)` off the cut.
    pub fn chi_at(&self, k: C) -> Result<C> {
        if self.on_cut(k) {
            return Err(Error::OnCutEvaluation { k });
        }
        let k0 = self.k0;
        // subtract the value at the nearest cut point so the integrand stays bounded
        let near = k.im.abs() < 2.0 * k0 && k.re.abs() < k0 + 2.0 * k.im.abs().max(1e-3);
        let (anchor, f_anchor) = if near {
            let a = k.re.clamp(-k0, k0);
            (Some(a), self.log_ratio(a))
        } else {
            (None, 0.0)
        };
        let splits: Vec<f64> = anchor.into_iter().collect();
        let (v, _) = integrate(
            |xi| [C::new(self.log_ratio(xi) - f_anchor, 0.0) / (xi - k)],
            -k0,
            k0,
            &splits,
            &self.quad,
        )?;
        let total = v[0] + log_mobius(k, k0) * f_anchor;
        Ok(total / C::new(0.0, 2.0 * PI))
    }

    /// `X(±k0)`: the integrand is bounded because the log ratio vanishes at both endpoints
    /// (exactly at `k0`, and at `-k0` by the symmetry `|γ(-k)| = |γ(k)|`).
    pub fn chi_endpoint(&self, sign: f64) -> Result<C> {
        let e = sign.signum() * self.k0;
        let fe = self.log_ratio(e);
        if fe.abs() > 1e-8 {
            log::warn!("log ratio {fe:e} at endpoint {e}: |γ| is not even on the sampled grid");
        }
        let (v, _) = integrate(
            |xi| {
                let d = xi - e;
                [C::new(if d == 0.0 { 0.0 } else { (self.log_ratio(xi) - fe) / d }, 0.0)]
            },
            -self.k0,
            self.k0,
            &[],
            &self.quad,
        )?;
        Ok(v[0] / C::new(0.0, 2.0 * PI))
    }

    /// `det δ(k) = ((k - k0)/(k + k0))^{iν} e^{X(k)}` with the principal branch.
    pub fn det_delta_at(&self, k: C) -> Result<C> {
        let chi = self.chi_at(k)?;
        Ok(compute_det_delta(self.nu, chi, k, self.k0))
    }

    /// `(1/2π) ∫_{-k0}^{k0} log(1 + |γ|^2) dξ`, the large-`k` coefficient of `det δ`.
    pub fn log_mass(&self) -> Result<f64> {
        let (v, _) = integrate(|xi| [C::new(norm_sq(&(self.gamma)(xi)).ln_1p(), 0.0)], -self.k0, self.k0, &[], &self.quad)?;
        Ok(v[0].re / (2.0 * PI))
    }
}

/// `((k - k0)/(k + k0))^{iν} e^{X}`.
pub fn compute_det_delta(nu: f64, chi: C, k: C, k0: f64) -> C {
    (C::new(0.0, nu) * log_mobius(k, k0) + chi).exp()
}

/// Value of the matrix conjugation factor at a point.
#[derive(Debug, Clone, Copy)]
pub struct DeltaValue {
    pub delta: Mat2,
    pub det: C,
    /// Set when the construction is not exact for the given reflection data.
    pub approximate: bool,
    /// Largest relative commutator of `log(I + γ†γ)` between sampled points.
    pub commutator: f64,
}

/// Strategy for the 2x2 factor `δ(k)` off the cut.
pub trait DeltaFactor: Send + Sync {
    fn name(&self) -> &'static str;
    fn delta_at(&self, scalars: &ConjugationScalars, k: C) -> Result<DeltaValue>;
}

/// `log(I + γ(ξ)† γ(ξ))` for the row vector `γ`.
fn log_jump(g: &[C; 2]) -> Mat2 {
    let h: Mat2 = [
        [C::new(1.0, 0.0) + g[0].conj() * g[0], g[0].conj() * g[1]],
        [g[1].conj() * g[0], C::new(1.0, 0.0) + g[1].conj() * g[1]],
    ];
    logm2(&h)
}

/// Relative commutator of the log-jump matrices on 16 sample points of the cut.
pub fn jump_commutator(scalars: &ConjugationScalars) -> f64 {
    let k0 = scalars.k0;
    let mats: Vec<Mat2> = (0..16)
        .map(|i| log_jump(&scalars.gamma_at(-k0 + 2.0 * k0 * (i as f64 + 0.5) / 16.0)))
        .collect();
    let scale = mats
        .iter()
        .map(|m| m.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for a in 0..mats.len() {
        for b in a + 1..mats.len() {
            worst = worst.max(commutator_norm2(&mats[a], &mats[b]));
        }
    }
    worst / (scale * scale)
}

/// Relative commutator above which the Plemelj construction is flagged approximate.
pub const COMMUTATOR_TOLERANCE: f64 = 1e-8;

/// `δ(k) = exp((1/2πi) ∫ log(I + γ†γ)(ξ) dξ/(ξ - k))`, exact when the jumps commute.
pub struct MatrixPlemelj;

/// `δ(k) ≈ (det δ(k))^{1/2} I`.
pub struct ScalarProxy;

impl DeltaFactor for MatrixPlemelj {
    fn name(&self) -> &'static str {
        "matrix_plemelj"
    }

    fn delta_at(&self, s: &ConjugationScalars, k: C) -> Result<DeltaValue> {
        if s.on_cut(k) {
            return Err(Error::OnCutEvaluation { k });
        }
        let k0 = s.k0;
        let anchor = k.re.clamp(-k0, k0);
        let ga = log_jump(&s.gamma_at(anchor));
        let (v, _) = integrate(
            |xi| {
                let g = log_jump(&s.gamma_at(xi));
                let d = xi - k;
                [(g[0][0] - ga[0][0]) / d, (g[0][1] - ga[0][1]) / d, (g[1][0] - ga[1][0]) / d, (g[1][1] - ga[1][1]) / d]
            },
            -k0,
            k0,
            &[anchor],
            &s.quad,
        )?;
        let lm = log_mobius(k, k0);
        let scale = C::new(0.0, 2.0 * PI);
        let exponent: Mat2 = [
            [(v[0] + ga[0][0] * lm) / scale, (v[1] + ga[0][1] * lm) / scale],
            [(v[2] + ga[1][0] * lm) / scale, (v[3] + ga[1][1] * lm) / scale],
        ];
        let delta = expm2(&exponent);
        let commutator = jump_commutator(s);
        Ok(DeltaValue {
            delta,
            det: (exponent[0][0] + exponent[1][1]).exp(),
            approximate: commutator > COMMUTATOR_TOLERANCE,
            commutator,
        })
    }
}

impl DeltaFactor for ScalarProxy {
    fn name(&self) -> &'static str {
        "scalar_proxy"
    }

    fn delta_at(&self, s: &ConjugationScalars, k: C) -> Result<DeltaValue> {
        let det = s.det_delta_at(k)?;
        let r = det.sqrt();
        let zero = C::new(0.0, 0.0);
        let nontrivial = (0..=16).any(|i| norm_sq(&s.gamma_at(-s.k0 + 2.0 * s.k0 * i as f64 / 16.0)) > 0.0);
        Ok(DeltaValue { delta: [[r, zero], [zero, r]], det, approximate: nontrivial, commutator: jump_commutator(s) })
    }
}

pub fn delta_registry() -> Registry<dyn DeltaFactor> {
    let mut r: Registry<dyn DeltaFactor> = Registry::new("delta");
    r.register("matrix_plemelj", || Box::new(MatrixPlemelj));
    r.register("scalar_proxy", || Box::new(ScalarProxy));
    r
}

pub const DEFAULT_DELTA: &str = "matrix_plemelj";

/// Coefficients of the parabolic-cylinder local model at `±k0`.
#[derive(Debug, Clone, Serialize)]
pub struct LocalModelCoeffs {
    pub k0: f64,
    pub t: f64,
    /// `τ = k0^3 t`.
    pub tau: f64,
    pub nu: f64,
    pub chi_minus_k0: C,
    /// Column vector (rows 1-2, column 3 of the local residue).
    pub beta12: [C; 2],
    /// Row vector `-β12^†`.
    pub beta21: [C; 2],
    pub delta_a: C,
    pub m1_a0: Mat3,
    pub m1_b0: Mat3,
}

/// `ς = diag(σ1, 1)`.
pub fn varsigma() -> Mat3 {
    let (z, o) = (C::new(0.0, 0.0), C::new(1.0, 0.0));
    [[z, o, z], [o, z, z], [z, z, o]]
}

/// `-ς M* ς`.
pub fn reflect_b0(m: &Mat3) -> Mat3 {
    // ς permutes the first two rows and columns
    let p = [1usize, 0, 2];
    let mut out = [[C::new(0.0, 0.0); 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = -m[p[r]][p[c]].conj();
        }
    }
    out
}

/// Local-model coefficients from `γ(k0)`, `ν`, `X(-k0)`, `k0` and `t`.
pub fn compute_local_coeffs(gamma_k0: [C; 2], nu: f64, chi_minus_k0: C, k0: f64, t: f64) -> Result<LocalModelCoeffs> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime { t });
    }
    if !(k0 > 0.0) {
        return Err(Error::InvalidInput(format!("k0 = {k0} must be positive")));
    }
    if nu > 0.0 {
        return Err(Error::InvalidInput(format!("nu = {nu} must be non-positive")));
    }
    let i = C::new(0.0, 1.0);
    let zero = C::new(0.0, 0.0);
    let tau = k0.powi(3) * t;
    let beta12 = if nu == 0.0 {
        [zero, zero]
    } else {
        let pref = gamma(C::new(0.0, -nu)) * nu * (PI * nu / 2.0).exp() * C::from_polar(1.0, -PI / 4.0)
            / (2.0 * PI).sqrt();
        // σ2 γ^T = (-i γ2, i γ1)^T
        [pref * (-i * gamma_k0[1]), pref * (i * gamma_k0[0])]
    };
    let beta21 = [-beta12[0].conj(), -beta12[1].conj()];
    let delta_a = (chi_minus_k0 - i * 8.0 * tau + i * (nu / 2.0) * (192.0 * tau).ln()).exp();
    let d2 = delta_a * delta_a;
    let mut m1_a0 = [[zero; 3]; 3];
    m1_a0[0][2] = i * beta12[0] / d2;
    m1_a0[1][2] = i * beta12[1] / d2;
    m1_a0[2][0] = -i * d2 * beta21[0];
    m1_a0[2][1] = -i * d2 * beta21[1];
    let m1_b0 = reflect_b0(&m1_a0);
    Ok(LocalModelCoeffs { k0, t, tau, nu, chi_minus_k0, beta12, beta21, delta_a, m1_a0, m1_b0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_gamma(g: [C; 2]) -> GammaFn {
        Arc::new(move |_| g)
    }

    #[test]
    fn nu_examples() {
        let z = C::new(0.0, 0.0);
        assert_eq!(compute_nu([z, z]), 0.0);
        let r = ((2.0 * PI).exp() - 1.0).sqrt();
        assert!((compute_nu([C::new(r, 0.0), z]) + 1.0).abs() < 1e-14);
        assert!((compute_nu([C::new(0.6, 0.0), C::new(0.0, 0.8)]) + 2f64.ln() / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn constant_gamma_gives_zero_chi() {
        let s = ConjugationScalars::new(constant_gamma([C::new(0.3, 0.1), C::new(-0.2, 0.0)]), 1.0).unwrap();
        for k in [C::new(0.2, 0.5), C::new(3.0, 0.0), C::new(-0.7, -0.01)] {
            assert!(s.chi_at(k).unwrap().norm() < 1e-15);
        }
        assert!(matches!(s.chi_at(C::new(0.5, 1e-9)), Err(Error::OnCutEvaluation { .. })));
        assert!(matches!(s.chi_at(C::new(1.0, 0.0)), Err(Error::OnCutEvaluation { .. })));
    }

    #[test]
    fn zero_gamma_gives_unit_det_delta_and_zero_coefficients() {
        let z = C::new(0.0, 0.0);
        let s = ConjugationScalars::new(constant_gamma([z, z]), 0.7).unwrap();
        assert_eq!(s.nu, 0.0);
        assert!((s.det_delta_at(C::new(0.1, 0.3)).unwrap() - 1.0).norm() == 0.0);
        let lc = compute_local_coeffs([z, z], 0.0, z, 0.7, 5.0).unwrap();
        assert!(lc.m1_a0.iter().flatten().all(|v| v.norm() == 0.0));
        assert!(lc.beta12.iter().chain(&lc.beta21).all(|v| v.norm() == 0.0));
    }

    #[test]
    fn b0_symmetry_and_beta21_relation() {
        let g = [C::new(0.2, -0.1), C::new(0.05, 0.3)];
        let nu = compute_nu(g);
        let lc = compute_local_coeffs(g, nu, C::new(0.01, -0.02), 0.8, 10.0).unwrap();
        for c in 0..2 {
            assert_eq!(lc.beta21[c], -lc.beta12[c].conj());
        }
        let back = reflect_b0(&lc.m1_b0);
        for r in 0..3 {
            for c in 0..3 {
                assert!((back[r][c] - lc.m1_a0[r][c]).norm() == 0.0);
            }
        }
        assert!((lc.tau - 0.512 * 10.0).abs() < 1e-12);
    }
}
