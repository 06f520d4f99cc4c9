//! Sampled complex profiles on uniform grids.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex profile `u(x_i)` on a uniform grid at time `time`.
///
/// The vector potential is always `q = (u, conj u)`, so only `u` is stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexField {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
    pub time: f64,
}

impl ComplexField {
    /// Validates spacing uniformity (relative 1e-12) and finiteness.
    pub fn new(xs: Vec<f64>, values: Vec<Complex64>, time: f64) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} abscissae but {} values",
                xs.len(),
                values.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidGrid("need at least two grid points".into()));
        }
        let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        if !(dx > 0.0) {
            return Err(Error::InvalidGrid("grid must be increasing".into()));
        }
        // relative 1e-12 on the spacing, plus the rounding of the abscissae themselves
        let scale = xs[0].abs().max(xs[xs.len() - 1].abs());
        let tol = 1e-12 * dx + 8.0 * f64::EPSILON * scale;
        for (i, w) in xs.windows(2).enumerate() {
            if ((w[1] - w[0]) - dx).abs() > tol {
                return Err(Error::InvalidGrid(format!(
                    "non-uniform spacing at index {i}: {} vs {dx}",
                    w[1] - w[0]
                )));
            }
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite value at index {i}")));
        }
        if !time.is_finite() {
            return Err(Error::InvalidInput("non-finite time".into()));
        }
        Ok(Self { xs, values, time })
    }

    /// Uniform grid `xmin + i*dx`, `i = 0..n`, filled by `f`.
    pub fn from_fn(xmin: f64, dx: f64, n: usize, time: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let xs: Vec<f64> = (0..n).map(|i| xmin + i as f64 * dx).collect();
        let values = xs.iter().map(|&x| f(x)).collect();
        Self { xs, values, time }
    }

    /// Zero profile on a uniform grid.
    pub fn zeros(xmin: f64, dx: f64, n: usize, time: f64) -> Self {
        Self::from_fn(xmin, dx, n, time, |_| Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn dx(&self) -> f64 {
        (self.xs[self.xs.len() - 1] - self.xs[0]) / (self.xs.len() - 1) as f64
    }

    pub fn xmin(&self) -> f64 {
        self.xs[0]
    }

    pub fn xmax(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Largest modulus at the first or last grid point.
    pub fn edge_amplitude(&self) -> f64 {
        self.values[0].norm().max(self.values[self.values.len() - 1].norm())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Trapezoid approximation of `(∫|u|^2 dx)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        trapezoid_sq(&self.values, self.dx()).sqrt()
    }

    /// `max_i |u_i - v_i|` after checking the grids agree.
    pub fn sup_distance(&self, other: &ComplexField) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Trapezoid approximation of `(∫|u - v|^2 dx)^{1/2}`.
    pub fn l2_distance(&self, other: &ComplexField) -> Result<f64> {
        self.check_same_grid(other)?;
        let diff: Vec<Complex64> = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(trapezoid_sq(&diff, self.dx()).sqrt())
    }

    pub fn check_same_grid(&self, other: &ComplexField) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch(format!("{} vs {} points", self.len(), other.len())));
        }
        let tol = 1e-9 * self.dx();
        if (self.xmin() - other.xmin()).abs() > tol || (self.xmax() - other.xmax()).abs() > tol {
            return Err(Error::GridMismatch(format!(
                "[{}, {}] vs [{}, {}]",
                self.xmin(),
                self.xmax(),
                other.xmin(),
                other.xmax()
            )));
        }
        Ok(())
    }
}

pub(crate) fn trapezoid_sq(values: &[Complex64], dx: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = values.iter().map(|v| v.norm_sqr()).sum();
    dx * (inner - 0.5 * (values[0].norm_sqr() + values[n - 1].norm_sqr()))
}
