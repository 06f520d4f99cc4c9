//! Exact N-soliton solutions from the reflectionless residue system.
//!
//! With `w_j = k_j x + 4 k_j^3 t`, `γ_j = c_j e^{2i w_j}` and
//! `γ̃_j = -c_j^† e^{-2i w̄_j}`, the residues of
//! `M(k) = I + Σ_j [α_j | 0]/(k - k_j) + Σ_j [0 | β_j]/(k - k̄_j)` solve, row by row,
//!
//! `α_j - Σ_t β_t γ_j/(k_j - k̄_t) = e_3 γ_j`,
//! `β_j - Σ_t α_t γ̃_j/(k̄_j - k_t) = (γ̃_j; 0)`,
//!
//! and `u = 2i Σ_j β_{j,1}`, `ū = 2i Σ_j β_{j,2}`.

use crate::conjugation::{ConjugationScalars, DeltaFactor};
use crate::direct_scattering::ScatteringData;
use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::linalg::{identity3, inv2, row_mul2, solve_dense, Mat3, C};
use crate::registry::Registry;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest exponent magnitude evaluated without rescaling.
pub const EXPONENT_LIMIT: f64 = 700.0;

/// Tolerance of the `ū = conj(u)` consistency check.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;

/// `tθ(k) = k x + 4 k^3 t`, regular at `t = 0`.
pub fn phase(k: C, x: f64, t: f64) -> C {
    k * x + k * k * k * (4.0 * t)
}

/// Velocity `4(Im^2 k - 3 Re^2 k)` of the soliton attached to pole `k`.
pub fn pole_velocity(k: C) -> f64 {
    4.0 * (k.im * k.im - 3.0 * k.re * k.re)
}

/// How residue equations whose exponential factor `e^{s_j}` is large are treated.
pub trait ExponentPolicy: Send + Sync {
    fn name(&self) -> &'static str;
    /// Amount `σ_j` by which pole `j`'s equations are divided (`e^{σ_j}`), given `s_j`.
    fn log_divisor(&self, s: f64) -> Result<f64>;
}

/// Divides the equations of every growing pole by its exponential factor.
pub struct Rescale;

/// Evaluates exponents as they are and fails beyond `EXPONENT_LIMIT`.
pub struct Strict;

impl ExponentPolicy for Rescale {
    fn name(&self) -> &'static str {
        "rescale"
    }
    fn log_divisor(&self, s: f64) -> Result<f64> {
        Ok(s.max(0.0))
    }
}

impl ExponentPolicy for Strict {
    fn name(&self) -> &'static str {
        "strict"
    }
    fn log_divisor(&self, s: f64) -> Result<f64> {
        if s.abs() > EXPONENT_LIMIT {
            return Err(Error::ExponentOverflow { exponent: s });
        }
        Ok(0.0)
    }
}

pub fn exponent_registry() -> Registry<dyn ExponentPolicy> {
    let mut r: Registry<dyn ExponentPolicy> = Registry::new("exponent policy");
    r.register("rescale", || Box::new(Rescale));
    r.register("strict", || Box::new(Strict));
    r
}

pub const DEFAULT_EXPONENT_POLICY: &str = "rescale";

/// Solved residue system at one `(x, t)`.
#[derive(Debug, Clone)]
pub struct ResidueSolution {
    pub poles: Vec<C>,
    /// `α_j`, 3x2, stored row-major.
    pub alpha: Vec<[[C; 2]; 3]>,
    /// `β_j`, 3x1.
    pub beta: Vec<[C; 3]>,
    /// Exponent `s_j = -2 Im w_j` of `|γ_j|/|c_j|`.
    pub exponents: Vec<f64>,
    /// Log of the divisor applied to pole `j`'s equations.
    pub log_divisors: Vec<f64>,
    /// Largest 1-norm condition number over the three row systems.
    pub condition: f64,
    pub relative_residual: f64,
}

impl ResidueSolution {
    /// `(2i Σ β_{j,1}, 2i Σ β_{j,2})`, the two components of `q`.
    pub fn q_pair(&self) -> (C, C) {
        let two_i = C::new(0.0, 2.0);
        let s1: C = self.beta.iter().map(|b| b[0]).sum();
        let s2: C = self.beta.iter().map(|b| b[1]).sum();
        (two_i * s1, two_i * s2)
    }

    /// `M(k)` from the residue ansatz, `k` off the pole set.
    pub fn m_at(&self, k: C) -> Mat3 {
        let mut m = identity3();
        for (j, &kj) in self.poles.iter().enumerate() {
            let da = C::new(1.0, 0.0) / (k - kj);
            let db = C::new(1.0, 0.0) / (k - kj.conj());
            for r in 0..3 {
                m[r][0] += self.alpha[j][r][0] * da;
                m[r][1] += self.alpha[j][r][1] * da;
                m[r][2] += self.beta[j][r] * db;
            }
        }
        m
    }
}

fn check_poles(poles: &[C], norming: &[[C; 2]]) -> Result<()> {
    if poles.len() != norming.len() {
        return Err(Error::InvalidInput(format!("{} poles but {} norming constants", poles.len(), norming.len())));
    }
    for (i, &k) in poles.iter().enumerate() {
        if !(k.im > 0.0) {
            return Err(Error::InvalidInput(format!("pole {k} not in the upper half-plane")));
        }
        if poles[..i].iter().any(|&q| (q - k).norm() < 1e-12) {
            return Err(Error::SystemSingular { condition: f64::INFINITY });
        }
    }
    Ok(())
}

/// Assembles and solves the residue system with the default rescaling policy.
pub fn assemble_and_solve(sigma_d: &ScatteringData, x: f64, t: f64) -> Result<ResidueSolution> {
    assemble_and_solve_with(&sigma_d.poles, &sigma_d.norming, x, t, &Rescale)
}

pub fn assemble_and_solve_with(
    poles: &[C],
    norming: &[[C; 2]],
    x: f64,
    t: f64,
    policy: &dyn ExponentPolicy,
) -> Result<ResidueSolution> {
    check_poles(poles, norming)?;
    let p = poles.len();
    let zero = C::new(0.0, 0.0);
    let i2 = C::new(0.0, 2.0);
    let mut exponents = Vec::with_capacity(p);
    let mut log_divisors = Vec::with_capacity(p);
    let mut g = Vec::with_capacity(p);
    let mut gt = Vec::with_capacity(p);
    let mut self_coef = Vec::with_capacity(p);
    for (j, &k) in poles.iter().enumerate() {
        let w = phase(k, x, t);
        let s = -2.0 * w.im;
        let sigma = policy.log_divisor(s)?;
        let mag = (s - sigma).exp();
        let rot = (i2 * w.re).exp();
        let c = norming[j];
        g.push([c[0] * rot * mag, c[1] * rot * mag]);
        gt.push([-c[0].conj() / rot * mag, -c[1].conj() / rot * mag]);
        self_coef.push((-sigma).exp());
        exponents.push(s);
        log_divisors.push(sigma);
    }
    // α_j[r, :] = μ_{j,r} γ_j / e^{σ_j}, so each row r reduces to 2P unknowns (μ, β):
    //   e^{-σ_j} μ_j - Σ_t β_t/(k_j - k̄_t) = δ_{r3}
    //   e^{-σ_j} β_j - Σ_t μ_t (γ̂_t · γ̃̂_j)/(k̄_j - k_t) = γ̃̂_{j,r}
    // with γ̂_j = γ_j e^{-σ_j}, γ̃̂_j = γ̃_j e^{-σ_j}.
    let n = 2 * p;
    let mut alpha = vec![[[zero; 2]; 3]; p];
    let mut beta = vec![[zero; 3]; p];
    let mut condition = 1.0f64;
    let mut relative_residual = 0.0f64;
    if p > 0 {
        for r in 0..3 {
            let mut a = vec![zero; n * n];
            let mut b = vec![zero; n];
            for j in 0..p {
                let row = j;
                a[row * n + j] = C::new(self_coef[j], 0.0);
                if norming[j][0].norm() == 0.0 && norming[j][1].norm() == 0.0 {
                    a[row * n + j] = C::new(1.0, 0.0);
                } else {
                    if r == 2 {
                        b[row] = C::new(1.0, 0.0);
                    }
                    for tt in 0..p {
                        a[row * n + p + tt] -= C::new(1.0, 0.0) / (poles[j] - poles[tt].conj());
                    }
                }
                let row = p + j;
                a[row * n + p + j] = C::new(self_coef[j], 0.0);
                if r < 2 {
                    b[row] = gt[j][r];
                }
                for tt in 0..p {
                    let dot = g[tt][0] * gt[j][0] + g[tt][1] * gt[j][1];
                    a[row * n + tt] -= dot / (poles[j].conj() - poles[tt]);
                }
            }
            let sol = solve_dense(&a, n, &b)?;
            condition = condition.max(sol.condition);
            relative_residual = relative_residual.max(sol.relative_residual);
            for j in 0..p {
                alpha[j][r] = [sol.x[j] * g[j][0], sol.x[j] * g[j][1]];
                beta[j][r] = sol.x[p + j];
            }
        }
    }
    Ok(ResidueSolution {
        poles: poles.to_vec(),
        alpha,
        beta,
        exponents,
        log_divisors,
        condition,
        relative_residual,
    })
}

/// `u = 2i Σ β_{j,1}`, checked against the companion `2i Σ β_{j,2} = ū`.
pub fn reconstruct(solution: &ResidueSolution) -> Result<C> {
    let (u, ub) = solution.q_pair();
    let deviation = (ub - u.conj()).norm();
    if !(deviation <= SYMMETRY_TOLERANCE * u.norm().max(1.0)) {
        return Err(Error::SymmetryBroken { deviation });
    }
    Ok(u)
}

/// `u(x, t)` of the reflectionless data in `sigma_d`.
pub fn soliton_u(sigma_d: &ScatteringData, x: f64, t: f64) -> Result<C> {
    reconstruct(&assemble_and_solve(sigma_d, x, t)?)
}

/// Samples the soliton solution on `xs` at time `t` (points evaluated in parallel).
pub fn soliton_field(sigma_d: &ScatteringData, xs: &[f64], t: f64) -> Result<ComplexField> {
    soliton_field_with(sigma_d, xs, t, &Rescale)
}

pub fn soliton_field_with(sigma_d: &ScatteringData, xs: &[f64], t: f64, policy: &dyn ExponentPolicy) -> Result<ComplexField> {
    sigma_d.validate()?;
    let results: Vec<Result<C>> = xs
        .par_iter()
        .map(|&x| assemble_and_solve_with(&sigma_d.poles, &sigma_d.norming, x, t, policy).and_then(|s| reconstruct(&s)))
        .collect();
    let failures: Vec<(usize, &Error)> =
        results.iter().enumerate().filter_map(|(i, r)| r.as_ref().err().map(|e| (i, e))).collect();
    if let Some(&(i, e)) = failures.first() {
        if failures.len() == xs.len() {
            return Err(e.clone());
        }
        return Err(Error::PartialFailure {
            failed: failures.len(),
            total: xs.len(),
            first: format!("x[{i}] = {}: {e}", xs[i]),
        });
    }
    let values = results.into_iter().map(|r| r.unwrap()).collect();
    ComplexField::new(xs.to_vec(), values, t)
}

/// Space-time cone `v2 <= x/t <= v1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub v2: f64,
    pub v1: f64,
}

impl ConeSpec {
    pub fn new(v2: f64, v1: f64) -> Result<Self> {
        if !(v2 <= v1) {
            return Err(Error::InvalidInput(format!("cone requires v2 <= v1, got [{v2}, {v1}]")));
        }
        Ok(Self { v2, v1 })
    }

    /// Spectral band `I = [-v1/4, -v2/4]` for `3 Re^2 k - Im^2 k`.
    pub fn band(&self) -> (f64, f64) {
        (-self.v1 / 4.0, -self.v2 / 4.0)
    }

    pub fn contains_pole(&self, k: C) -> bool {
        let (lo, hi) = self.band();
        let s = 3.0 * k.re * k.re - k.im * k.im;
        s >= lo && s <= hi
    }

    pub fn contains_point(&self, x: f64, t: f64) -> bool {
        t > 0.0 && x / t >= self.v2 && x / t <= self.v1
    }
}

/// Band-filtered scattering data.
#[derive(Debug, Clone)]
pub struct FilteredData {
    pub data: ScatteringData,
    /// Indices of the retained poles in the input.
    pub kept: Vec<usize>,
    /// Set when the matrix `δ` used for the norming constants is approximate.
    pub approximate: bool,
    /// Largest relative jump commutator reported by the `δ` strategy (zero when unused).
    pub commutator: f64,
}

/// Restricts the discrete spectrum to the cone's band.
///
/// For cones with `v1 < 0` and nonzero reflection, the retained norming constants become
/// `c_j δ^{-1}(k_j) / det δ(k_j)`; `conjugation` must then supply the scalars at `k0` and
/// the `δ` strategy. Otherwise the constants are kept as they are.
pub fn cone_filter(
    sigma_d: &ScatteringData,
    cone: &ConeSpec,
    conjugation: Option<(&ConjugationScalars, &dyn DeltaFactor)>,
) -> Result<FilteredData> {
    let kept: Vec<usize> = (0..sigma_d.poles.len()).filter(|&j| cone.contains_pole(sigma_d.poles[j])).collect();
    let has_reflection = sigma_d.gamma.iter().any(|g| g[0].norm() > 0.0 || g[1].norm() > 0.0);
    let mut approximate = false;
    let mut commutator = 0.0f64;
    let mut norming = Vec::with_capacity(kept.len());
    for &j in &kept {
        let c = sigma_d.norming[j];
        if cone.v1 < 0.0 && has_reflection {
            let (scalars, delta) = conjugation.ok_or_else(|| {
                Error::InvalidInput("cone with v1 < 0 and nonzero reflection needs conjugation data".into())
            })?;
            let dv = delta.delta_at(scalars, sigma_d.poles[j])?;
            approximate |= dv.approximate;
            commutator = commutator.max(dv.commutator);
            let ci = row_mul2(&c, &inv2(&dv.delta));
            norming.push([ci[0] / dv.det, ci[1] / dv.det]);
        } else {
            norming.push(c);
        }
    }
    Ok(FilteredData {
        data: ScatteringData {
            poles: kept.iter().map(|&j| sigma_d.poles[j]).collect(),
            norming,
            gamma_k: sigma_d.gamma_k.clone(),
            gamma: sigma_d.gamma.clone(),
        },
        kept,
        approximate,
        commutator,
    })
}

/// `μ(I) = min over excluded poles of Im k_j · dist(3 Re^2 k_j - Im^2 k_j, I)`; infinite when none is excluded.
pub fn mu_of_cone(sigma_d: &ScatteringData, cone: &ConeSpec) -> f64 {
    let (lo, hi) = cone.band();
    sigma_d
        .poles
        .iter()
        .filter(|&&k| !cone.contains_pole(k))
        .map(|k| {
            let s = 3.0 * k.re * k.re - k.im * k.im;
            let dist = if s < lo { lo - s } else { s - hi };
            k.im * dist
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_soliton() -> ScatteringData {
        let a = C::new(0.7, 0.2);
        ScatteringData::reflectionless(vec![C::new(0.0, 0.8)], vec![[a, -a.conj()]])
    }

    #[test]
    fn no_poles_gives_identity_and_zero() {
        let sd = ScatteringData::default();
        let sol = assemble_and_solve(&sd, 1.0, 2.0).unwrap();
        assert_eq!(sol.m_at(C::new(0.3, 0.0)), identity3());
        assert_eq!(reconstruct(&sol).unwrap(), C::new(0.0, 0.0));
        let f = soliton_field(&sd, &[-1.0, 0.0, 1.0], 0.0).unwrap();
        assert!(f.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn one_soliton_amplitude_and_evenness() {
        let sd = one_soliton();
        // |u| peaks at 2 Im k = 1.6 times the profile factor; check evenness about the peak
        let xs: Vec<f64> = (0..4001).map(|i| -10.0 + 0.005 * i as f64).collect();
        let f = soliton_field(&sd, &xs, 0.0).unwrap();
        let (imax, _) = f.values.iter().enumerate().max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap()).unwrap();
        let x0 = xs[imax];
        for d in [0.3, 0.9, 2.0] {
            let l = soliton_u(&sd, x0 - d, 0.0).unwrap().norm();
            let r = soliton_u(&sd, x0 + d, 0.0).unwrap().norm();
            assert!((l - r).abs() < 2e-2 * l, "{d}: {l} vs {r}");
        }
    }

    #[test]
    fn inadmissible_self_paired_constant_breaks_symmetry() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sd = ScatteringData::reflectionless(vec![C::new(0.0, 0.8)], vec![[C::new(s, 0.0), C::new(s, 0.0)]]);
        let sol = assemble_and_solve(&sd, 0.0, 0.0).unwrap();
        assert!(matches!(reconstruct(&sol), Err(Error::SymmetryBroken { .. })));
    }

    #[test]
    fn rescaling_matches_direct_evaluation_and_strict_overflows() {
        let sd = one_soliton();
        for x in [-3.0, 0.0, 2.5] {
            let a = assemble_and_solve_with(&sd.poles, &sd.norming, x, 0.4, &Rescale).unwrap();
            let b = assemble_and_solve_with(&sd.poles, &sd.norming, x, 0.4, &Strict).unwrap();
            assert!((reconstruct(&a).unwrap() - reconstruct(&b).unwrap()).norm() < 1e-13);
        }
        assert!(matches!(
            assemble_and_solve_with(&sd.poles, &sd.norming, -600.0, 0.0, &Strict),
            Err(Error::ExponentOverflow { .. })
        ));
        let far = reconstruct(&assemble_and_solve_with(&sd.poles, &sd.norming, -600.0, 0.0, &Rescale).unwrap()).unwrap();
        assert!(far.norm() < 1e-100);
    }

    #[test]
    fn cone_band_and_mu_examples() {
        let cone = ConeSpec::new(-16.0, -12.0).unwrap();
        assert_eq!(cone.band(), (3.0, 4.0));
        let k = C::new(1.0, 1.0);
        assert!(!cone.contains_pole(k));
        let sd = ScatteringData::reflectionless(vec![k, -k.conj()], vec![[C::new(1.0, 0.0); 2]; 2]);
        assert_eq!(mu_of_cone(&sd, &cone), 1.0);
        let filtered = cone_filter(&sd, &cone, None).unwrap();
        assert!(filtered.data.poles.is_empty());
        let wide = ConeSpec::new(-100.0, 100.0).unwrap();
        assert_eq!(mu_of_cone(&sd, &wide), f64::INFINITY);
        let sd2 = ScatteringData::reflectionless(vec![C::new(0.0, 0.5), C::new(1.0, 0.5)], vec![[C::new(1.0, 0.0); 2]; 2]);
        let band = ConeSpec::new(-0.4, 0.0).unwrap();
        // 3Re^2 - Im^2: -0.25 and 2.75; band [0, 0.1]
        let want = (0.5f64 * 0.25).min(0.5 * 2.65);
        assert!((mu_of_cone(&sd2, &band) - want).abs() < 1e-15);
    }

    #[test]
    fn exponent_registry_names() {
        let r = exponent_registry();
        assert_eq!(r.names(), vec!["rescale".to_string(), "strict".to_string()]);
        assert_eq!(r.create(DEFAULT_EXPONENT_POLICY).unwrap().name(), "rescale");
    }
}
