use mhdlab::linear::{eigenvalues, propagate_linear, propagate_mode, regime, Regime};
use mhdlab::solver::{MHDState, Physics, Stepper};
use mhdlab::spectral::random::band_limited;
use mhdlab::{Grid, VectorField};
use num_complex::Complex64;
use proptest::prelude::*;

fn xi() -> impl Strategy<Value = (f64, f64)> {
    (-8.0f64..8.0, -8.0f64..8.0).prop_filter("nonzero", |&(a, b)| a.hypot(b) > 1e-3)
}

/// Frequencies with `|ξ|² ≤ 2|ξ₁|`.
fn parabolic_xi() -> impl Strategy<Value = (f64, f64)> {
    (1e-3f64..2.0, -1.0f64..1.0, any::<bool>()).prop_map(|(m, frac, neg)| {
        let a = if neg { -m } else { m };
        (a, frac * (2.0 * m - m * m).sqrt())
    })
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn curl_data(g: Grid, seed: u64) -> VectorField {
    let u = VectorField::curl_of_stream(&band_limited(g, seed, 6));
    let m =
        u.x.coeffs()
            .iter()
            .chain(u.y.coeffs())
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    u.scaled(1.0 / m)
}

fn max_mode_diff(a: &VectorField, b: &VectorField) -> f64 {
    a.components()
        .iter()
        .zip(b.components())
        .flat_map(|(x, y)| {
            x.coeffs()
                .iter()
                .zip(y.coeffs())
                .map(|(p, q)| (p - q).norm())
        })
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn trace_and_determinant((a, b) in xi()) {
        let (lp, lm) = eigenvalues(a, b).unwrap();
        let k2 = a * a + b * b;
        let tol = 1e-12 * (k2 + a * a);
        prop_assert!((lp + lm + k2).norm() <= tol);
        prop_assert!((lp * lm - a * a).norm() <= tol);
    }

    #[test]
    fn no_growth_and_damping_off_the_axis((a, b) in xi()) {
        let (lp, lm) = eigenvalues(a, b).unwrap();
        prop_assert!(lp.re <= 0.0 && lm.re <= 0.0);
        prop_assert!(lp.re.max(lm.re) < 0.0);
    }

    #[test]
    fn axis_modes_have_an_undamped_branch(b in 1e-3f64..8.0) {
        let (lp, lm) = eigenvalues(0.0, b).unwrap();
        prop_assert!(lp.re.max(lm.re) == 0.0);
        prop_assert!((lp.re.min(lm.re) + b * b).abs() <= 1e-12 * b * b);
    }

    #[test]
    fn parabolic_modes_decay_at_half_the_heat_rate(
        (a, b) in parabolic_xi(), u0 in complex(), v0 in complex(), t in 0.0f64..20.0
    ) {
        prop_assert_eq!(regime(a, b).unwrap(), Regime::Parabolic);
        let k2 = a * a + b * b;
        let (u, v) = propagate_mode(a, k2, (u0, v0), t);
        // e^{−t|ξ|²/2}(cos ωt + sin ωt/ω (M + |ξ|²/2)) with |sin ωt/ω| ≤ t
        let bound = (-0.5 * t * k2).exp() * (1.0 + t * (0.5 * k2 + a.abs())) * (u0.norm() + v0.norm());
        prop_assert!(u.norm() <= bound * (1.0 + 1e-12) + 1e-14);
        prop_assert!(v.norm() <= bound * (1.0 + 1e-12) + 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn propagator_is_a_semigroup(seed in any::<u64>(), s in 0.0f64..3.0, t in 0.0f64..3.0) {
        let g = Grid::new(16, 24, 20.0, 30.0).unwrap();
        let u0 = curl_data(g, seed);
        let v0 = curl_data(g, seed ^ 7);
        let (u1, v1) = propagate_linear(&u0, &v0, s);
        let (u2, v2) = propagate_linear(&u1, &v1, t);
        let (u3, v3) = propagate_linear(&u0, &v0, s + t);
        prop_assert!(max_mode_diff(&u2, &u3) <= 1e-10);
        prop_assert!(max_mode_diff(&v2, &v3) <= 1e-10);
    }
}

#[test]
fn linear_solver_tracks_the_exact_propagator() {
    let g = Grid::square(16, 20.0).unwrap();
    let stepper = Stepper::new(
        g,
        Physics {
            nonlinear: false,
            evolve_a: false,
        },
    );
    let (dt, steps) = (1e-3, 500);
    let mut s = MHDState::equilibrium(g);
    s.u = curl_data(g, 3);
    s.h = curl_data(g, 4);
    let (u0, h0) = (s.u.clone(), s.h.clone());
    for _ in 0..steps {
        s = stepper.step(&s, dt).unwrap();
    }
    let t = dt * steps as f64;
    let (ue, he) = propagate_linear(&u0, &h0, t);
    let err = max_mode_diff(&s.u, &ue).max(max_mode_diff(&s.h, &he));
    assert!(err <= 1e-8 * t, "per-mode error {err:e} over t = {t}");
}
