mod common;

use common::{gaussian, one_soliton, soliton_pair};
use nalgebra::Matrix3;
use ssq_core::direct_scattering::*;
use ssq_core::ode::OdeTolerance;
use ssq_core::soliton_engine::soliton_field;
use ssq_core::{Complex64 as C, ComplexField, Error};

fn tight() -> OdeTolerance {
    OdeTolerance { atol: 1e-13, rtol: 1e-13, ..OdeTolerance::default() }
}

/// `S = e^{ikLσ} exp((-ikσ + U) L)` for `u = A` on `[0, L]`.
fn box_oracle(amp: C, len: f64, k: f64) -> Matrix3<C> {
    let i = C::new(0.0, 1.0);
    let sigma = [1.0, 1.0, -1.0];
    let z = C::new(0.0, 0.0);
    let mut g = Matrix3::from_row_slice(&[z, z, amp, z, z, amp.conj(), -amp.conj(), -amp, z]);
    for m in 0..3 {
        g[(m, m)] = -i * k * sigma[m];
    }
    let e = (g * C::new(len, 0.0)).exp();
    let mut s = e;
    for r in 0..3 {
        for c in 0..3 {
            s[(r, c)] = e[(r, c)] * (i * k * len * sigma[r]).exp();
        }
    }
    s
}

#[test]
fn box_potential_matches_matrix_exponential() {
    let amp = C::new(0.3, 0.1);
    let len = 2.0;
    let n = 2001;
    let f = ComplexField::from_fn(0.0, len / (n - 1) as f64, n, 0.0, |_| amp);
    for k in [-1.3, 0.0, 0.7, 2.5] {
        let want = box_oracle(amp, len, k);
        let s = scattering_matrix(&f, C::new(k, 0.0), &tight()).unwrap();
        let (a, b) = transition_at(&f, C::new(k, 0.0), &tight()).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                assert!((s[r][c] - want[(r, c)]).norm() < 1e-8, "k={k} S[{r}][{c}]");
            }
        }
        for r in 0..2 {
            for c in 0..2 {
                assert!((a[r][c] - want[(r, c)]).norm() < 1e-8);
            }
            assert!((b[r] - want[(2, r)]).norm() < 1e-8);
        }
    }
}

fn generic_profile() -> ComplexField {
    ComplexField::from_fn(-12.0, 0.02, 1201, 0.0, |x| {
        C::new(0.4, 0.3) * (-x * x).exp() * C::from_polar(1.0, 0.5 * x) + C::new(0.0, 0.2) * (-(x - 1.0).powi(2) * 2.0).exp()
    })
}

#[test]
fn transition_symmetry_and_unit_determinant() {
    let f = generic_profile();
    let grid = uniform_k_grid(-3.0, 3.0, 25);
    let td = compute_transition(&f, &grid, &JostConfig::default()).unwrap();
    assert!(td.failures.is_empty());
    let (ra, rb) = td.symmetry_residual().unwrap();
    assert!(ra < 1e-8 && rb < 1e-8, "symmetry residuals {ra:e} {rb:e}");
    assert!(td.det_s_residual(&f, &OdeTolerance::default()).unwrap() < 1e-8);
    assert!(td.det_a_violations(1e-6).is_empty());
    // γ(k) = γ̄(-k) σ1
    let g = td.gamma();
    let n = g.len();
    for i in 0..n {
        assert!((g[i][0] - g[n - 1 - i][1].conj()).norm() < 1e-8);
    }
}

#[test]
fn small_amplitude_matches_born_approximation() {
    // û(κ) = ∫u e^{-iκx} = A √π e^{-κ²/4}; γ2(k) ≈ -û(2k), γ1(k) ≈ -conj(û(-2k))
    let amp = 1e-4;
    let f = gaussian(C::new(amp, 0.0), 1.0, -10.0, 0.02, 1001);
    let grid = uniform_k_grid(-1.5, 1.5, 7);
    let td = compute_transition(&f, &grid, &JostConfig { tol: tight(), ..JostConfig::default() }).unwrap();
    for (k, g) in grid.iter().zip(td.gamma()) {
        let uh = amp * std::f64::consts::PI.sqrt() * (-k * k).exp();
        assert!((g[1] + uh).norm() < 1e-3 * uh.abs().max(1e-12) + 1e-11, "k={k}: {} vs {}", g[1], -uh);
        assert!((g[0] + uh).norm() < 1e-3 * uh.abs().max(1e-12) + 1e-11);
    }
}

#[test]
fn grid_refinement_order_at_least_two() {
    let u = |x: f64| C::new(0.5, 0.2) * (-x * x).exp() * C::from_polar(1.0, x);
    let a_at = |dx: f64| {
        let n = (16.0 / dx).round() as usize + 1;
        let f = ComplexField::from_fn(-8.0, dx, n, 0.0, u);
        transition_at(&f, C::new(0.6, 0.0), &tight()).unwrap().0
    };
    let (a1, a2, a3) = (a_at(0.4), a_at(0.2), a_at(0.1));
    let diff = |p: &[[C; 2]; 2], q: &[[C; 2]; 2]| (0..4).map(|i| (p[i / 2][i % 2] - q[i / 2][i % 2]).norm()).fold(0.0, f64::max);
    let p = (diff(&a1, &a2) / diff(&a2, &a3)).log2();
    assert!(p >= 2.0, "observed order {p}");
}

fn soliton_profile(sd: &ScatteringData) -> ComplexField {
    let xs: Vec<f64> = (0..2048).map(|i| -40.0 + i as f64 * 80.0 / 2048.0).collect();
    soliton_field(sd, &xs, 0.0).unwrap()
}

#[test]
fn one_soliton_round_trip() {
    let sd = one_soliton();
    let f = soliton_profile(&sd);
    let cfg = JostConfig::default();
    let bx = SearchBox { re_min: -2.0, re_max: 2.0, im_min: 0.05, im_max: 2.0 };
    let grid = uniform_k_grid(-5.0, 5.0, 41);
    let (data, td) = scatter(&f, &grid, &bx, &cfg, &BoundStateConnection).unwrap();
    assert!(td.failures.is_empty());
    assert_eq!(data.poles.len(), 1);
    assert!((data.poles[0] - sd.poles[0]).norm() < 1e-3);
    assert!(data.gamma_sup() < 1e-2);
    let (c, want) = (data.norming[0], sd.norming[0]);
    let rel = ((c[0] - want[0]).norm() + (c[1] - want[1]).norm()) / (want[0].norm() + want[1].norm());
    assert!(rel < 1e-2, "norming {c:?} vs {want:?}");
}

#[test]
fn two_soliton_round_trip_closed_under_reflection() {
    let sd = soliton_pair(C::new(0.3, 0.7), [C::new(0.5, 0.1), C::new(0.2, -0.3)]);
    let f = soliton_profile(&sd);
    let cfg = JostConfig::default();
    let bx = SearchBox { re_min: -2.0, re_max: 2.0, im_min: 0.05, im_max: 2.0 };
    let mut poles = find_discrete_spectrum(&f, &bx, &cfg).unwrap();
    poles.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
    assert_eq!(poles.len(), 2);
    assert!((poles[0] - C::new(-0.3, 0.7)).norm() < 1e-3);
    assert!((poles[1] - C::new(0.3, 0.7)).norm() < 1e-3);
    assert!((poles[0] + poles[1].conj()).norm() < 1e-6);
    let c = compute_norming_constants(&f, &poles, &cfg).unwrap();
    let partner = partner_norming(c[1]);
    assert!((c[0][0] - partner[0]).norm() + (c[0][1] - partner[1]).norm() < 1e-3 * (c[0][0].norm() + c[0][1].norm()));
}

#[test]
fn derivative_step_halving_is_consistent() {
    let sd = one_soliton();
    let f = soliton_profile(&sd);
    let tol = tight();
    let det = |k: C| det_a(&f, k, &tol);
    let k = sd.poles[0];
    let d1 = derivative_adaptive(&det, k, 1e-2).unwrap();
    let d2 = derivative_adaptive(&det, k, 5e-3).unwrap();
    assert!((d1 - d2).norm() < 1e-6 * d1.norm(), "{d1} vs {d2}");
}

#[test]
fn continued_b_refuses_slow_decay() {
    let sd = one_soliton();
    let f = soliton_profile(&sd);
    let r = ContinuedTransition.norming_constant(&f, sd.poles[0], &JostConfig::default());
    assert!(matches!(r, Err(Error::ContinuationUnreliable { .. })));
}

#[test]
fn unknown_norming_method_lists_choices() {
    match norming_registry().create("nope") {
        Err(Error::UnknownStrategy { available, .. }) => assert!(available.contains("bound_state")),
        other => panic!("unexpected {:?}", other.map(|m| m.name())),
    }
}
