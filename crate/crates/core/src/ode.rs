//! Adaptive Dormand-Prince 5(4) integration of small complex systems.

use num_complex::Complex64;

pub type State = [Complex64; 3];

#[derive(Debug, Clone, Copy)]
pub struct OdeTolerance {
    pub atol: f64,
    pub rtol: f64,
    /// Hard cap on accepted plus rejected steps.
    pub max_steps: usize,
}

impl Default for OdeTolerance {
    fn default() -> Self {
        Self { atol: 1e-10, rtol: 1e-10, max_steps: 2_000_000 }
    }
}

/// Failure position of an integration.
#[derive(Debug, Clone, Copy)]
pub struct OdeFailure {
    pub x: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..3 {
            out[i] += k[i] * (c * h);
        }
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction).
///
/// `h0` is the initial step magnitude; `None` picks `|x1 - x0| / 100`.
pub fn integrate(
    f: impl Fn(f64, &State) -> State,
    x0: f64,
    x1: f64,
    y0: State,
    h0: Option<f64>,
    tol: &OdeTolerance,
) -> Result<(State, OdeStats), OdeFailure> {
    let span = x1 - x0;
    let mut stats = OdeStats::default();
    if span == 0.0 {
        return Ok((y0, stats));
    }
    let dir = span.signum();
    let hmin = 1e-13 * span.abs().max(1.0);
    let mut h = h0.unwrap_or(span.abs() / 100.0).min(span.abs()) * dir;
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    while (x1 - x) * dir > 0.0 {
        if stats.accepted + stats.rejected >= tol.max_steps {
            return Err(OdeFailure { x });
        }
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let k2 = f(x + h / 5.0, &axpy(&y, &[(A21, &k1)], h));
        let k3 = f(x + 0.3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(x + 0.8 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(
            x + 8.0 / 9.0 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = f(
            x + h,
            &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        );
        let ynew = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
        let k7 = f(x + h, &ynew);
        let mut err = 0.0f64;
        for i in 0..3 {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let sc = tol.atol + tol.rtol * y[i].norm().max(ynew[i].norm());
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            stats.rejected += 1;
            h *= 0.2;
            if h.abs() < hmin {
                return Err(OdeFailure { x });
            }
            continue;
        }
        if err <= 1.0 {
            x += h;
            y = ynew;
            k1 = k7;
            stats.accepted += 1;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if h.abs() < hmin {
                return Err(OdeFailure { x });
            }
        }
    }
    Ok((y, stats))
}
