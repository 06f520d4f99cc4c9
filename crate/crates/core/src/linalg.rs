//! Small dense complex linear algebra: LU with partial pivoting, 3x3 and 2x2 helpers.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type C = Complex64;
pub type Mat3 = [[C; 3]; 3];
pub type Mat2 = [[C; 2]; 2];

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

/// Condition number above which a system is reported singular.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// LU factorization (row-major, in place) with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<C>,
    perm: Vec<usize>,
    singular: bool,
}

impl Lu {
    pub fn factor(a: &[C], n: usize) -> Self {
        assert_eq!(a.len(), n * n);
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for col in 0..n {
            let (piv, max) = (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if max == 0.0 {
                singular = true;
                continue;
            }
            if piv != col {
                for j in 0..n {
                    lu.swap(col * n + j, piv * n + j);
                }
                perm.swap(col, piv);
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let f = lu[r * n + col] / d;
                lu[r * n + col] = f;
                if f != ZERO {
                    for j in col + 1..n {
                        let v = lu[col * n + j];
                        lu[r * n + j] -= f * v;
                    }
                }
            }
        }
        Self { n, lu, perm, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[C]) -> Vec<C> {
        let n = self.n;
        let mut x: Vec<C> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let v = self.lu[i * n + j] * x[j];
                x[i] -= v;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let v = self.lu[i * n + j] * x[j];
                x[i] -= v;
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// Explicit inverse, row-major.
    pub fn inverse(&self) -> Vec<C> {
        let n = self.n;
        let mut inv = vec![ZERO; n * n];
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = ZERO);
            e[j] = ONE;
            let col = self.solve(&e);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        inv
    }
}

/// Matrix 1-norm (maximum absolute column sum).
pub fn norm1(a: &[C], n: usize) -> f64 {
    (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn matvec(a: &[C], n: usize, x: &[C]) -> Vec<C> {
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum())
        .collect()
}

/// Result of a dense solve.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    pub x: Vec<C>,
    /// 1-norm condition number `||A||_1 ||A^{-1}||_1`.
    pub condition: f64,
    /// `||Ax - b||_inf / (||A||_inf ||x||_inf + ||b||_inf)`.
    pub relative_residual: f64,
}

/// Solves `A x = b` by LU with partial pivoting and one refinement step.
///
/// Fails with `SystemSingular` when the condition number exceeds 1e14.
pub fn solve_dense(a: &[C], n: usize, b: &[C]) -> Result<DenseSolution> {
    if n == 0 {
        return Ok(DenseSolution { x: vec![], condition: 1.0, relative_residual: 0.0 });
    }
    let lu = Lu::factor(a, n);
    if lu.is_singular() {
        return Err(Error::SystemSingular { condition: f64::INFINITY });
    }
    let inv = lu.inverse();
    let condition = norm1(a, n) * norm1(&inv, n);
    if !condition.is_finite() || condition > SINGULAR_CONDITION {
        return Err(Error::SystemSingular { condition });
    }
    let mut x = lu.solve(b);
    let r: Vec<C> = matvec(a, n, &x).iter().zip(b).map(|(ax, bi)| bi - ax).collect();
    let dx = lu.solve(&r);
    for (xi, di) in x.iter_mut().zip(&dx) {
        *xi += di;
    }
    let ax = matvec(a, n, &x);
    let res = ax.iter().zip(b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
    let anorm = (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let xnorm = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let bnorm = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let denom = anorm * xnorm + bnorm;
    let relative_residual = if denom > 0.0 { res / denom } else { 0.0 };
    Ok(DenseSolution { x, condition, relative_residual })
}

pub fn identity3() -> Mat3 {
    let mut m = [[ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|l| a[i][l] * b[l][j]).sum();
        }
    }
    m
}

pub fn add3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = *a;
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += b[i][j];
        }
    }
    m
}

pub fn conj3(a: &Mat3) -> Mat3 {
    let mut m = *a;
    m.iter_mut().flatten().for_each(|v| *v = v.conj());
    m
}

pub fn max_abs3(a: &Mat3) -> f64 {
    a.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Inverse of a 3x3 matrix through the dense solver (condition-checked).
pub fn inv3(a: &Mat3) -> Result<Mat3> {
    let flat: Vec<C> = a.iter().flatten().copied().collect();
    let lu = Lu::factor(&flat, 3);
    if lu.is_singular() {
        return Err(Error::SystemSingular { condition: f64::INFINITY });
    }
    let inv = lu.inverse();
    let condition = norm1(&flat, 3) * norm1(&inv, 3);
    if condition > SINGULAR_CONDITION {
        return Err(Error::SystemSingular { condition });
    }
    let mut m = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = inv[i * 3 + j];
        }
    }
    Ok(m)
}

pub fn det2(a: &Mat2) -> C {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn adj2(a: &Mat2) -> Mat2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut m = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

pub fn inv2(a: &Mat2) -> Mat2 {
    let d = det2(a);
    let adj = adj2(a);
    [[adj[0][0] / d, adj[0][1] / d], [adj[1][0] / d, adj[1][1] / d]]
}

/// Row vector times 2x2 matrix.
pub fn row_mul2(v: &[C; 2], a: &Mat2) -> [C; 2] {
    [v[0] * a[0][0] + v[1] * a[1][0], v[0] * a[0][1] + v[1] * a[1][1]]
}

/// `f(A) = f(l1) I + f[l1, l2] (A - l1 I)` for a 2x2 matrix with eigenvalues `l1`, `l2`.
///
/// `divided` must return the divided difference `(f(l2) - f(l1)) / (l2 - l1)`,
/// including its confluent limit.
fn matrix_function2(a: &Mat2, f: impl Fn(C) -> C, divided: impl Fn(C, C) -> C) -> Mat2 {
    let m = (a[0][0] + a[1][1]) * 0.5;
    let s = (m * m - det2(a)).sqrt();
    let (l1, l2) = (m - s, m + s);
    let f1 = f(l1);
    let dd = divided(l1, l2);
    [
        [f1 + dd * (a[0][0] - l1), dd * a[0][1]],
        [dd * a[1][0], f1 + dd * (a[1][1] - l1)],
    ]
}

/// Matrix exponential of a 2x2 complex matrix.
pub fn expm2(a: &Mat2) -> Mat2 {
    matrix_function2(a, |z| z.exp(), |l1, l2| {
        // (e^{l2} - e^{l1})/(l2 - l1) = e^{m} sinh(h)/h with h = (l2 - l1)/2
        let h = (l2 - l1) * 0.5;
        let m = (l1 + l2) * 0.5;
        m.exp() * sinhc(h)
    })
}

/// Principal matrix logarithm of a 2x2 matrix with eigenvalues off the negative axis.
pub fn logm2(a: &Mat2) -> Mat2 {
    matrix_function2(a, |z| z.ln(), |l1, l2| {
        let d = l2 - l1;
        let mean = (l1 + l2) * 0.5;
        if d.norm() <= 1e-4 * mean.norm() {
            // log-divided difference expanded about the midpoint
            let r = d / mean;
            (ONE + r * r / 12.0 + r.powi(4) / 80.0) / mean
        } else {
            (l2.ln() - l1.ln()) / d
        }
    })
}

fn sinhc(h: C) -> C {
    if h.norm() < 1e-4 {
        let h2 = h * h;
        ONE + h2 / 6.0 + h2 * h2 / 120.0
    } else {
        h.sinh() / h
    }
}

/// Frobenius norm of `AB - BA`.
pub fn commutator_norm2(a: &Mat2, b: &Mat2) -> f64 {
    let ab = mul2(a, b);
    let ba = mul2(b, a);
    let mut s = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            s += (ab[i][j] - ba[i][j]).norm_sqr();
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn dense_solve_recovers_known_solution() {
        let a = vec![c(2.0, 1.0), c(0.0, 1.0), c(1.0, 0.0), c(1.0, -1.0), c(3.0, 0.0), c(0.5, 0.5), c(0.0, 0.0), c(1.0, 2.0), c(4.0, 0.0)];
        let x = vec![c(1.0, -1.0), c(0.5, 2.0), c(-3.0, 0.25)];
        let b = matvec(&a, 3, &x);
        let sol = solve_dense(&a, 3, &b).unwrap();
        for (p, q) in sol.x.iter().zip(&x) {
            assert!((p - q).norm() < 1e-14);
        }
        assert!(sol.relative_residual < 1e-15);
    }

    #[test]
    fn singular_system_is_reported() {
        let a = vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        assert!(matches!(solve_dense(&a, 2, &[ONE, ONE]), Err(Error::SystemSingular { .. })));
    }

    #[test]
    fn expm_and_logm_are_inverse() {
        let h: Mat2 = [[c(1.7, 0.0), c(0.3, -0.4)], [c(0.3, 0.4), c(1.2, 0.0)]];
        let back = expm2(&logm2(&h));
        for i in 0..2 {
            for j in 0..2 {
                assert!((back[i][j] - h[i][j]).norm() < 1e-14);
            }
        }
        let scalar: Mat2 = [[c(2.0, 0.0), ZERO], [ZERO, c(2.0, 0.0)]];
        let l = logm2(&scalar);
        assert!((l[0][0] - c(2f64.ln(), 0.0)).norm() < 1e-15 && l[0][1].norm() == 0.0);
    }

    #[test]
    fn expm_of_nilpotent() {
        let n: Mat2 = [[ZERO, c(0.0, 2.0)], [ZERO, ZERO]];
        let e = expm2(&n);
        assert!((e[0][0] - ONE).norm() < 1e-15 && (e[0][1] - c(0.0, 2.0)).norm() < 1e-15);
    }
}
