//! Local cubic interpolation of uniformly sampled data.

use num_complex::Complex64;

/// Four-point Lagrange interpolation on a uniform grid.
///
/// Values outside `[x0, x0 + (n-1) dx]` are `outside` (zero for decaying profiles).
#[derive(Debug, Clone)]
pub struct UniformCubic<'a> {
    x0: f64,
    dx: f64,
    values: &'a [Complex64],
    outside: Complex64,
}

impl<'a> UniformCubic<'a> {
    pub fn new(x0: f64, dx: f64, values: &'a [Complex64]) -> Self {
        Self { x0, dx, values, outside: Complex64::new(0.0, 0.0) }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.values.len();
        let s = (x - self.x0) / self.dx;
        let last = (n - 1) as f64;
        if s < -1e-12 || s > last + 1e-12 || n == 0 {
            return self.outside;
        }
        if n < 4 {
            let i = (s.floor() as usize).min(n.saturating_sub(2));
            let w = s - i as f64;
            return if n == 1 { self.values[0] } else { self.values[i] * (1.0 - w) + self.values[i + 1] * w };
        }
        // stencil start i with nodes i..i+3, s as centered as possible
        let i = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let t = s - i as f64;
        let (t0, t1, t2, t3) = (t, t - 1.0, t - 2.0, t - 3.0);
        let w0 = -t1 * t2 * t3 / 6.0;
        let w1 = t0 * t2 * t3 / 2.0;
        let w2 = -t0 * t1 * t3 / 2.0;
        let w3 = t0 * t1 * t2 / 6.0;
        self.values[i] * w0 + self.values[i + 1] * w1 + self.values[i + 2] * w2 + self.values[i + 3] * w3
    }
}

/// Piecewise-cubic interpolation on an arbitrary increasing grid of `N`-vector samples.
pub fn cubic_on_grid<const N: usize>(xs: &[f64], ys: &[[Complex64; N]], x: f64) -> [Complex64; N] {
    let n = xs.len();
    let mut out = [Complex64::new(0.0, 0.0); N];
    if n == 0 {
        return out;
    }
    if n < 4 {
        let j = match xs.iter().position(|&v| v > x) {
            Some(0) => return ys[0],
            Some(j) => j,
            None => return ys[n - 1],
        };
        let w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        for c in 0..N {
            out[c] = ys[j - 1][c] * (1.0 - w) + ys[j][c] * w;
        }
        return out;
    }
    let j = xs.partition_point(|&v| v <= x);
    let i = (j as isize - 2).clamp(0, n as isize - 4) as usize;
    let nodes = &xs[i..i + 4];
    for (a, &xa) in nodes.iter().enumerate() {
        let mut w = 1.0;
        for (b, &xb) in nodes.iter().enumerate() {
            if a != b {
                w *= (x - xb) / (xa - xb);
            }
        }
        for c in 0..N {
            out[c] += ys[i + a][c] * w;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_reproduced_exactly() {
        let p = |x: f64| Complex64::new(x * x * x - 2.0 * x + 1.0, 0.5 * x * x);
        let vals: Vec<Complex64> = (0..10).map(|i| p(0.3 * i as f64 - 1.0)).collect();
        let it = UniformCubic::new(-1.0, 0.3, &vals);
        for &x in &[-1.0, -0.77, 0.0, 0.41, 1.55, 1.7] {
            assert!((it.eval(x) - p(x)).norm() < 1e-12, "{x}");
        }
        assert_eq!(it.eval(5.0), Complex64::new(0.0, 0.0));
        let xs: Vec<f64> = (0..10).map(|i| 0.3 * i as f64 - 1.0).collect();
        let ys: Vec<[Complex64; 1]> = xs.iter().map(|&x| [p(x)]).collect();
        assert!((cubic_on_grid(&xs, &ys, 0.123)[0] - p(0.123)).norm() < 1e-12);
    }
}
