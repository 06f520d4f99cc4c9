//! Space-time regions and the leading-order long-time formulas in each.
//!
//! Region I (`x < 0`): filtered soliton train plus the `t^{-1/2}` radiation term built from
//! the parabolic-cylinder local models at `±k0`. Region II (`x > 0`): filtered soliton train.
//! Region III (`|x| t^{-1/3}` bounded): self-similar Painlevé profile.

use crate::conjugation::{compute_local_coeffs, ConjugationScalars, DeltaFactor, GammaFn, LocalModelCoeffs};
use crate::direct_scattering::ScatteringData;
use crate::error::{Error, Result};
use crate::linalg::{add3, inv3, mul3, Mat3, C};
use crate::painleve2::PainleveSolution;
use crate::soliton_engine::{assemble_and_solve, cone_filter, reconstruct, ConeSpec};
use serde::Serialize;
use std::sync::Arc;

/// Default `|x| t^{-1/3}` threshold of the self-similar region.
pub const DEFAULT_Y_CUT: f64 = 2.0;

/// Default Sobolev-type exponent `p` in the region-III error order.
pub const DEFAULT_P: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    I,
    II,
    III,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionTag {
    pub region: Region,
    /// `ξ = x/t`.
    pub xi: f64,
    /// `y = x/t^{1/3}`.
    pub y: f64,
    /// `√(|x|/(12t))`; the phase points are `±k0` for `x < 0` and `±i k0` for `x > 0`.
    pub k0: f64,
    pub k0_imaginary: bool,
}

pub fn classify(x: f64, t: f64, y_cut: f64) -> Result<RegionTag> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime { t });
    }
    let y = x / t.cbrt();
    let region = if y.abs() <= y_cut {
        Region::III
    } else if x < 0.0 {
        Region::I
    } else {
        Region::II
    };
    Ok(RegionTag { region, xi: x / t, y, k0: (x.abs() / (12.0 * t)).sqrt(), k0_imaginary: x > 0.0 })
}

/// `θ(k) = ξ k + 4k^3`, so that `tθ(k) = kx + 4k^3 t`.
pub fn theta(k: C, xi: f64) -> C {
    k * xi + k * k * k * 4.0
}

/// `Re iθ(k) = 4(Im^2 k - 3 Re^2 k + 3 k0^2) Im k`.
pub fn re_i_theta(k: C, k0: f64) -> f64 {
    4.0 * (k.im * k.im - 3.0 * k.re * k.re + 3.0 * k0 * k0) * k.im
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticEvaluation {
    pub region: RegionTag,
    pub leading: C,
    pub correction: C,
    /// `e` in the claimed remainder `O(t^e)`.
    pub claimed_error_order: f64,
    /// Set when the conjugation factor used for the norming constants is approximate.
    pub approximate: bool,
    /// Relative jump commutator behind `approximate`.
    pub commutator: f64,
}

impl AsymptoticEvaluation {
    pub fn total(&self) -> C {
        self.leading + self.correction
    }
}

/// Region-I radiation data at one point.
#[derive(Debug, Clone, Serialize)]
pub struct RadiationTerm {
    pub coeffs: LocalModelCoeffs,
    /// `M^{out}(k0) M1^{A0} M^{out}(k0)^{-1} + M^{out}(-k0) M1^{B0} M^{out}(-k0)^{-1}`, scaled by `1/√(48 k0)`.
    pub h: Mat3,
    /// `2i t^{-1/2} h_{13}`.
    pub correction: C,
}

fn gamma_fn(sigma_d: &ScatteringData) -> GammaFn {
    let sd = Arc::new(ScatteringData { poles: vec![], norming: vec![], ..sigma_d.clone() });
    Arc::new(move |k| sd.gamma_at(k))
}

fn conjugate(m: &Mat3, a: &Mat3) -> Result<Mat3> {
    Ok(mul3(&mul3(m, a), &inv3(m)?))
}

/// Radiation term from the outer solution `m_out` (the filtered soliton `M`) and the local models.
pub fn radiation_term(scalars: &ConjugationScalars, m_out: impl Fn(C) -> Mat3, t: f64) -> Result<RadiationTerm> {
    let k0 = scalars.k0;
    let coeffs = compute_local_coeffs(scalars.gamma_at(k0), scalars.nu, scalars.chi_endpoint(-1.0)?, k0, t)?;
    let a = conjugate(&m_out(C::new(k0, 0.0)), &coeffs.m1_a0)?;
    let b = conjugate(&m_out(C::new(-k0, 0.0)), &coeffs.m1_b0)?;
    let s = 1.0 / (48.0 * k0).sqrt();
    let mut h = add3(&a, &b);
    h.iter_mut().flatten().for_each(|v| *v *= s);
    let correction = C::new(0.0, 2.0) * h[0][2] / t.sqrt();
    Ok(RadiationTerm { coeffs, h, correction })
}

/// Filtered soliton train plus radiation, for `x < 0`.
pub fn region1_evaluate(
    sigma_d: &ScatteringData,
    cone: &ConeSpec,
    x: f64,
    t: f64,
    delta: &dyn DeltaFactor,
) -> Result<AsymptoticEvaluation> {
    let (tag, eval, _) = region1_detail(sigma_d, cone, x, t, delta)?;
    debug_assert_eq!(tag, eval.region);
    Ok(eval)
}

/// [`region1_evaluate`] together with the radiation data.
pub fn region1_detail(
    sigma_d: &ScatteringData,
    cone: &ConeSpec,
    x: f64,
    t: f64,
    delta: &dyn DeltaFactor,
) -> Result<(RegionTag, AsymptoticEvaluation, RadiationTerm)> {
    let mut tag = classify(x, t, 0.0)?;
    if !(x < 0.0) {
        return Err(Error::InvalidInput(format!("region I needs x < 0, got x = {x}")));
    }
    tag.region = Region::I;
    if !cone.contains_point(x, t) {
        log::warn!("point ({x}, {t}) lies outside the cone [{}, {}]", cone.v2, cone.v1);
    }
    let scalars = ConjugationScalars::new(gamma_fn(sigma_d), tag.k0)?;
    let filtered = cone_filter(sigma_d, cone, Some((&scalars, delta)))?;
    let sol = assemble_and_solve(&filtered.data, x, t)?;
    let leading = reconstruct(&sol)?;
    let rad = radiation_term(&scalars, |k| sol.m_at(k), t)?;
    let eval = AsymptoticEvaluation {
        region: tag,
        leading,
        correction: rad.correction,
        claimed_error_order: -0.75,
        approximate: filtered.approximate,
        commutator: filtered.commutator,
    };
    Ok((tag, eval, rad))
}

/// Filtered soliton train with bare norming constants, for `x > 0`.
pub fn region2_evaluate(sigma_d: &ScatteringData, cone: &ConeSpec, x: f64, t: f64) -> Result<AsymptoticEvaluation> {
    let mut tag = classify(x, t, 0.0)?;
    if !(x > 0.0) {
        return Err(Error::InvalidInput(format!("region II needs x > 0, got x = {x}")));
    }
    tag.region = Region::II;
    if !cone.contains_point(x, t) {
        log::warn!("point ({x}, {t}) lies outside the cone [{}, {}]", cone.v2, cone.v1);
    }
    let filtered = cone_filter(sigma_d, cone, None)?;
    let leading = reconstruct(&assemble_and_solve(&filtered.data, x, t)?)?;
    Ok(AsymptoticEvaluation { region: tag, leading, correction: C::new(0.0, 0.0), claimed_error_order: -1.0, approximate: false, commutator: 0.0 })
}

/// `t^{-1/3} u_P(x t^{-1/3})` with claimed remainder order `2/(3p) - 1/2`.
pub fn region3_evaluate(painleve: &PainleveSolution, x: f64, t: f64, p: f64) -> Result<AsymptoticEvaluation> {
    let mut tag = classify(x, t, f64::INFINITY)?;
    if !(p > 4.0) {
        return Err(Error::InvalidInput(format!("exponent p = {p} must exceed 4")));
    }
    tag.region = Region::III;
    let (lo, hi) = (painleve.ys[0], *painleve.ys.last().unwrap());
    if tag.y < lo || tag.y > hi {
        log::warn!("y = {} outside the Painlevé grid [{lo}, {hi}]", tag.y);
    }
    let leading = painleve.eval(tag.y) / t.cbrt();
    Ok(AsymptoticEvaluation {
        region: tag,
        leading,
        correction: C::new(0.0, 0.0),
        claimed_error_order: 2.0 / (3.0 * p) - 0.5,
        approximate: false,
        commutator: 0.0,
    })
}

/// Everything needed to evaluate the asymptotics at arbitrary points.
pub struct AsymptoticModel<'a> {
    pub sigma_d: &'a ScatteringData,
    pub cone: ConeSpec,
    pub painleve: Option<&'a PainleveSolution>,
    pub delta: &'a dyn DeltaFactor,
    pub y_cut: f64,
    pub p: f64,
}

impl AsymptoticModel<'_> {
    /// Classifies `(x, t)` and applies the formula of its region.
    pub fn evaluate(&self, x: f64, t: f64) -> Result<AsymptoticEvaluation> {
        let tag = classify(x, t, self.y_cut)?;
        let mut eval = match tag.region {
            Region::I => region1_evaluate(self.sigma_d, &self.cone, x, t, self.delta)?,
            Region::II => region2_evaluate(self.sigma_d, &self.cone, x, t)?,
            Region::III => match self.painleve {
                Some(p) => region3_evaluate(p, x, t, self.p)?,
                None => return Err(Error::InvalidInput(format!("point ({x}, {t}) is in region III but no Painlevé solution was supplied"))),
            },
        };
        eval.region = tag;
        Ok(eval)
    }
}
