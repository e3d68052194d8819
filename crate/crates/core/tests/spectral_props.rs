use mhdlab::spectral::random::white;
use mhdlab::spectral::{transform_forward, transform_inverse};
use mhdlab::{Axis, Grid, SpectralField, VectorField};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid_strategy() -> impl Strategy<Value = Grid> {
    (
        prop::sample::select(vec![8usize, 12, 16, 32]),
        prop::sample::select(vec![8usize, 16, 24]),
        0.5f64..200.0,
        0.5f64..200.0,
    )
        .prop_map(|(n1, n2, l1, l2)| Grid::new(n1, n2, l1, l2).unwrap())
}

fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    (a - b).l2_norm() / b.l2_norm().max(1e-300)
}

fn vector(g: Grid, seed: u64) -> VectorField {
    VectorField {
        x: white(g, seed),
        y: white(g, seed ^ 0x5555),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_round_trip(g in grid_strategy(), seed in any::<u64>()) {
        let f = white(g, seed);
        let back = transform_forward(g, &transform_inverse(&f)).unwrap();
        prop_assert!(rel(&back, &f) <= 1e-12);
    }

    #[test]
    fn parseval(g in grid_strategy(), seed in any::<u64>()) {
        let f = white(g, seed);
        let samples = transform_inverse(&f);
        let mean_sq = samples.iter().map(|v| v * v).sum::<f64>() / g.len() as f64;
        let coeff_sq: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((mean_sq - coeff_sq).abs() <= 1e-12 * coeff_sq);
    }

    #[test]
    fn leray_idempotent_and_self_adjoint(g in grid_strategy(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let u = vector(g, s1);
        let v = vector(g, s2);
        let pu = u.leray_project();
        let ppu = pu.leray_project();
        prop_assert!((&ppu - &pu).l2_norm() <= 1e-12 * pu.l2_norm());
        let lhs = pu.inner(&v);
        let rhs = u.inner(&v.leray_project());
        prop_assert!((lhs - rhs).abs() <= 1e-12 * u.l2_norm() * v.l2_norm());
        prop_assert!(pu.divergence().l2_norm() <= 1e-12 * u.l2_norm());
    }

    #[test]
    fn partial_derivatives_commute(g in grid_strategy(), seed in any::<u64>()) {
        let f = white(g, seed);
        let a = f.partial(Axis::X1).partial(Axis::X2);
        let b = f.partial(Axis::X2).partial(Axis::X1);
        // the symbols commute; the two roundings of ξ₁ξ₂c differ by at most an ulp
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            prop_assert!((x - y).norm() <= 4.0 * f64::EPSILON * x.norm());
        }
    }

    #[test]
    fn power_multiplier_inverts_on_nonzero_modes(g in grid_strategy(), seed in any::<u64>(), s in -2.5f64..2.5) {
        let f = white(g, seed).without_mean();
        let up = f.apply_multiplier(|a, b| Complex64::new(a.hypot(b).powf(s), 0.0)).unwrap();
        let back = up.apply_multiplier(|a, b| Complex64::new(a.hypot(b).powf(-s), 0.0)).unwrap();
        prop_assert!(rel(&back, &f) <= 1e-12);
    }

    #[test]
    fn white_fields_are_real(g in grid_strategy(), seed in any::<u64>()) {
        prop_assert!(white(g, seed).conjugate_symmetry_defect() <= 1e-15);
    }
}
