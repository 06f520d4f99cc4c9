//! Globally adaptive Gauss-Kronrod (7/15) quadrature of complex vector integrands.

use crate::error::{Error, Result};
use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 4000 }
    }
}

struct Piece<const N: usize> {
    a: f64,
    b: f64,
    value: [Complex64; N],
    error: f64,
}

fn gk15<const N: usize>(f: &impl Fn(f64) -> [Complex64; N], a: f64, b: f64) -> Piece<N> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let zero = Complex64::new(0.0, 0.0);
    let mut kron = [zero; N];
    let mut gauss = [zero; N];
    let fc = f(c);
    for i in 0..N {
        kron[i] = fc[i] * WGK[7];
        gauss[i] = fc[i] * WG[3];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        for i in 0..N {
            let s = f1[i] + f2[i];
            kron[i] += s * WGK[j];
            if j % 2 == 1 {
                gauss[i] += s * WG[j / 2];
            }
        }
    }
    let mut error = 0.0f64;
    for i in 0..N {
        kron[i] *= h;
        gauss[i] *= h;
        error = error.max((kron[i] - gauss[i]).norm());
    }
    Piece { a, b, value: kron, error }
}

/// Integrates `f` over `[a, b]`, returning the value and the error estimate.
///
/// Breakpoints in `splits` (inside `(a, b)`) start the subdivision.
pub fn integrate<const N: usize>(
    f: impl Fn(f64) -> [Complex64; N],
    a: f64,
    b: f64,
    splits: &[f64],
    opts: &QuadOptions,
) -> Result<([Complex64; N], f64)> {
    let zero = Complex64::new(0.0, 0.0);
    if a == b {
        return Ok(([zero; N], 0.0));
    }
    let mut edges = vec![a];
    edges.extend(splits.iter().copied().filter(|&s| (s - a) * (b - s) > 0.0));
    edges.push(b);
    let m = edges.len() - 1;
    if b < a {
        edges[1..m].sort_by(|x, y| y.partial_cmp(x).unwrap());
    } else {
        edges[1..m].sort_by(|x, y| x.partial_cmp(y).unwrap());
    }
    let mut pieces: Vec<Piece<N>> = edges.windows(2).map(|w| gk15(&f, w[0], w[1])).collect();
    loop {
        let mut total = [zero; N];
        let mut err = 0.0;
        for p in &pieces {
            for i in 0..N {
                total[i] += p.value[i];
            }
            err += p.error;
        }
        let scale = total.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if err <= opts.abs_tol.max(opts.rel_tol * scale) {
            return Ok((total, err));
        }
        if pieces.len() >= opts.max_intervals || !err.is_finite() {
            return Err(Error::QuadratureFailure { estimate: err });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap();
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid == p.a || mid == p.b {
            return Err(Error::QuadratureFailure { estimate: err });
        }
        pieces.push(gk15(&f, p.a, mid));
        pieces.push(gk15(&f, mid, p.b));
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<(Complex64, f64)> {
    let (v, e) = integrate(|x| [f(x)], a, b, &[], opts)?;
    Ok((v[0], e))
}
