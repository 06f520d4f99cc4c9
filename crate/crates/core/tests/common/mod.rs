#![allow(dead_code)]

use ssq_core::direct_scattering::ScatteringData;
use ssq_core::{Complex64 as C, ComplexField};

/// One self-paired pole at `0.8i` with an admissible norming constant `(a, -ā)`.
pub fn one_soliton() -> ScatteringData {
    let a = C::new(0.7, 0.2);
    ScatteringData::reflectionless(vec![C::new(0.0, 0.8)], vec![[a, -a.conj()]])
}

/// A `-k̄` pair with partnered norming constants.
pub fn soliton_pair(k: C, c: [C; 2]) -> ScatteringData {
    ScatteringData::reflectionless(vec![k, -k.conj()], vec![c, [-c[1].conj(), -c[0].conj()]])
}

pub fn gaussian(amp: C, width: f64, xmin: f64, dx: f64, n: usize) -> ComplexField {
    ComplexField::from_fn(xmin, dx, n, 0.0, |x| amp * (-(x / width).powi(2)).exp())
}

/// `x_i = -L/2 + i L/n`.
pub fn periodic_xs(length: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| -length / 2.0 + i as f64 * length / n as f64).collect()
}
