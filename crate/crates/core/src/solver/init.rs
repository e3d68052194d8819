//! Initial data with `A₀(h₀ + H₀) = h₀`.
//!
//! `A₀ = ∇α₀` for a label map `α₀ = x + (γ, β)` with `det ∇α₀ = 1`. Two
//! constructions are provided.
//!
//! - From a prescribed `H₀` ([`label_map_from_field`]): `β = Δ⁻¹(∂₂H₁ − ∂₁H₂)`
//!   so that `H₀ = (∂₂β, −∂₁β)`, then `γ` solves the determinant constraint
//!   `∂₁γ = −∂₂β − J(γ, β)`, `J(γ, β) = ∂₁γ∂₂β − ∂₂γ∂₁β`, by fixed-point
//!   iteration. `∂₁` cannot be inverted on modes with `ξ₁ = 0`, so the
//!   constraint is solvable only when the right side has no content there;
//!   such `H₀` are accepted (a single mode with `m1 ≠ 0` is one) and others are
//!   rejected as incompatible.
//! - From a generating function ([`random_label_map`]): a periodic `g(x₁, α₂)`
//!   defines `x₂ = α₂ + ∂₁g(x₁, α₂)` and `α₁ = x₁ + ∂_{α₂}g(x₁, α₂)`, a map
//!   whose Jacobian is exactly 1. `H₀` is then read off `A₀` through
//!   `H₁ = 𝒜₂₂`, `H₂ = −𝒜₂₁`.

use ndarray::Array2;
use num_complex::Complex64;

use super::state::{MHDState, MatrixField};
use super::{InitKind, SolverConfig, SolverError};
use crate::diagnostics::invariants::residuals;
use crate::spectral::products::ProductSpace;
use crate::spectral::random::band_limited;
use crate::spectral::{Axis, Grid, SpectralField, VectorField};

/// Band `max(|m1|, |m2|) ≤ 4` of the random initial data.
pub const RANDOM_BAND: i64 = 4;
pub const MAX_ITERATIONS: usize = 100;
/// Residual bound every constructed state must meet.
pub const INIT_TOLERANCE: f64 = 1e-10;

/// Gradient of `x + (γ, β)`.
pub fn gradient_of_labels(gamma: &SpectralField, beta: &SpectralField) -> MatrixField {
    let mut a = [
        [gamma.partial(Axis::X1), gamma.partial(Axis::X2)],
        [beta.partial(Axis::X1), beta.partial(Axis::X2)],
    ];
    a[0][0].coeffs_mut()[0] += 1.0;
    a[1][1].coeffs_mut()[0] += 1.0;
    a
}

/// Magnetic perturbation carried by `A` through `H₁ = 𝒜₂₂`, `H₂ = −𝒜₂₁`.
pub fn field_from_gradient(a: &MatrixField) -> VectorField {
    let mut h1 = a[1][1].clone();
    h1.coeffs_mut()[0] -= 1.0;
    VectorField {
        x: h1,
        y: -&a[1][0],
    }
}

/// `∂₁⁻¹` on modes with `ξ₁ ≠ 0`; returns the inverse and the `L²` norm of
/// the part it could not invert (modes with `ξ₁ = 0`, mean excluded).
fn inverse_dx1(f: &SpectralField) -> (SpectralField, f64) {
    let grid = *f.grid();
    let mut out = SpectralField::zeros(grid);
    let mut left = 0.0;
    for (idx, &c) in f.coeffs().iter().enumerate().skip(1) {
        let (d1, _) = grid.derivative_xi(idx);
        if d1 == 0.0 {
            left += c.norm_sqr();
        } else {
            out.coeffs_mut()[idx] = c / Complex64::new(0.0, d1);
        }
    }
    (out, left.sqrt())
}

/// Label-map gradient consistent with a prescribed divergence-free `H₀`.
pub fn label_map_from_field(h: &VectorField) -> Result<MatrixField, SolverError> {
    let grid = *h.grid();
    let scale = h.l2_norm();
    if scale == 0.0 {
        return Ok(super::state::identity_matrix(grid));
    }
    let div = h.divergence().l2_norm();
    if div > INIT_TOLERANCE * scale {
        return Err(SolverError::DivergentMagneticData { divergence: div });
    }
    let beta = h.curl().inverse_laplacian();
    let space = ProductSpace::new(grid);
    let b1 = space.to_physical(&beta.partial(Axis::X1));
    let b2 = space.to_physical(&beta.partial(Axis::X2));
    let forcing = -&beta.partial(Axis::X2);
    let mut gamma = SpectralField::zeros(grid);
    let mut axis_left = 0.0;
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let g1 = space.to_physical(&gamma.partial(Axis::X1));
        let g2 = space.to_physical(&gamma.partial(Axis::X2));
        let jac: Array2<f64> = &g1 * &b2 - &g2 * &b1;
        let rhs = &forcing - &space.from_physical(&jac);
        let (next, left) = inverse_dx1(&rhs);
        let change = (&next - &gamma).l2_norm();
        gamma = next;
        axis_left = left;
        if change <= 1e-14 * gamma.l2_norm().max(scale) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SolverError::InitNonConvergence {
            iterations: MAX_ITERATIONS,
        });
    }
    if axis_left > INIT_TOLERANCE * scale {
        return Err(SolverError::IncompatibleMagneticData {
            residual: axis_left / scale,
        });
    }
    Ok(gradient_of_labels(&gamma.dealias(), &beta.dealias()))
}

/// Trigonometric polynomial with explicit coefficients, evaluable off-grid.
struct TrigPoly {
    modes: Vec<(f64, f64, Complex64)>,
}

impl TrigPoly {
    fn from_field(f: &SpectralField) -> Self {
        let g = f.grid();
        let modes = f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(idx, &c)| {
                let (a, b) = g.xi(idx);
                (a, b, c)
            })
            .collect();
        Self { modes }
    }
}

/// Gradient of the label map generated by `g`, and `g`'s own amplitude
/// `max |∇∂₁g|` for reference.
pub fn label_map_from_generator(gen: &SpectralField) -> Result<MatrixField, SolverError> {
    let grid = *gen.grid();
    let poly = TrigPoly::from_field(gen);
    let mut gamma = Array2::<f64>::zeros(grid.shape());
    let mut beta = Array2::<f64>::zeros(grid.shape());
    let i = Complex64::new(0.0, 1.0);
    for i1 in 0..grid.n1() {
        let (x1, _) = grid.point(i1, 0);
        // collapse x₁ for this row: ∂₁g and ∂_y g as sums over ξ₂ only
        let mut d1: Vec<(f64, Complex64)> = Vec::new();
        let mut dy: Vec<(f64, Complex64)> = Vec::new();
        for &(a, b, c) in &poly.modes {
            let base = c * Complex64::from_polar(1.0, a * x1);
            d1.push((b, i * a * base));
            dy.push((b, i * b * base));
        }
        let eval = |terms: &[(f64, Complex64)], y: f64| -> f64 {
            terms
                .iter()
                .map(|&(b, c)| (c * Complex64::from_polar(1.0, b * y)).re)
                .sum()
        };
        for i2 in 0..grid.n2() {
            let (_, x2) = grid.point(i1, i2);
            let mut y = x2;
            let mut ok = false;
            for _ in 0..MAX_ITERATIONS {
                let next = x2 - eval(&d1, y);
                let done = (next - y).abs() <= 1e-15 * (1.0 + x2.abs());
                y = next;
                if done {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Err(SolverError::InitNonConvergence {
                    iterations: MAX_ITERATIONS,
                });
            }
            beta[[i1, i2]] = y - x2;
            gamma[[i1, i2]] = eval(&dy, y);
        }
    }
    let gamma = crate::spectral::from_physical(grid, &gamma).dealias();
    let beta = crate::spectral::from_physical(grid, &beta).dealias();
    Ok(gradient_of_labels(
        &gamma.without_mean(),
        &beta.without_mean(),
    ))
}

fn vector_max_abs(v: &VectorField) -> f64 {
    let x = v.x.to_samples();
    let y = v.y.to_samples();
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| a.hypot(*b))
        .fold(0.0, f64::max)
}

/// Random label map of amplitude `max |∇∂₁g| = amplitude`.
pub fn random_label_map(grid: Grid, seed: u64, amplitude: f64) -> Result<MatrixField, SolverError> {
    let g = band_limited(grid, seed, RANDOM_BAND);
    let hess = VectorField {
        x: g.partial(Axis::X1).partial(Axis::X1),
        y: g.partial(Axis::X1).partial(Axis::X2),
    };
    let m = vector_max_abs(&hess);
    label_map_from_generator(&g.scaled(amplitude / m))
}

/// Random solenoidal velocity with `max |u| = amplitude`.
pub fn random_velocity(grid: Grid, seed: u64, amplitude: f64) -> VectorField {
    let psi = band_limited(grid, seed, RANDOM_BAND);
    let u = VectorField::curl_of_stream(&psi);
    let m = vector_max_abs(&u);
    u.scaled(amplitude / m)
}

/// `amplitude · ∇⊥ f / |ξ|` for the single real mode `f = cos(ξ·x + phase)`.
pub fn single_mode_field(grid: Grid, mode: (i64, i64), amplitude: f64, phase: f64) -> VectorField {
    let f = SpectralField::cosine_mode(grid, mode.0, mode.1, 1.0, phase);
    let idx = grid.index_of_mode(mode.0, mode.1).expect("mode on grid");
    VectorField::curl_of_stream(&f).scaled(amplitude / grid.xi_norm(idx))
}

fn mix_seed(seed: u64, stream: u64) -> u64 {
    seed.wrapping_mul(0x2545_f491_4f6c_dd1d)
        .wrapping_add(stream.wrapping_mul(0x9e37_79b9))
}

/// Initial state for a configuration; checked against every structural
/// invariant to [`INIT_TOLERANCE`].
pub fn init_state(cfg: &SolverConfig) -> Result<MHDState, SolverError> {
    let grid = cfg.grid;
    let eps = cfg.init.amplitude;
    let mut state = MHDState::equilibrium(grid);
    if eps == 0.0 {
        return Ok(state);
    }
    match cfg.init.kind {
        InitKind::Zero => {}
        InitKind::SingleMode => {
            state.u = single_mode_field(grid, cfg.init.mode, eps, 0.5 * std::f64::consts::PI);
            state.h = single_mode_field(grid, cfg.init.mode, eps, 0.0).leray_project();
            state.a = label_map_from_field(&state.h)?;
        }
        InitKind::Random => {
            state.u = random_velocity(grid, mix_seed(cfg.init.seed, 1), eps);
            state.a = random_label_map(grid, mix_seed(cfg.init.seed, 2), eps)?;
            state.h = field_from_gradient(&state.a);
        }
    }
    state.u = state.u.dealias().leray_project();
    let r = residuals(&state);
    for (name, value) in [
        ("frozen-in", r.frozen_in),
        ("determinant", r.det),
        ("gradient structure", r.grad_struct),
        ("coupling", r.coupling),
        ("div u", r.div_u),
        ("div H", r.div_h),
    ] {
        if !(value <= INIT_TOLERANCE) {
            return Err(SolverError::InitResidual { which: name, value });
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::DEFAULT_LENGTH;

    fn grid() -> Grid {
        Grid::square(32, DEFAULT_LENGTH).unwrap()
    }

    #[test]
    fn zero_field_gives_identity() {
        let a = label_map_from_field(&VectorField::zeros(grid())).unwrap();
        assert_eq!(a, super::super::state::identity_matrix(grid()));
    }

    #[test]
    fn single_mode_label_map() {
        let g = grid();
        let h = single_mode_field(g, (3, 2), 1e-3, 0.0);
        let a = label_map_from_field(&h).unwrap();
        let back = field_from_gradient(&a);
        assert!((&back - &h).l2_norm() < 1e-12 * h.l2_norm());
        let mut s = MHDState::equilibrium(g);
        s.h = h;
        s.a = a;
        let r = residuals(&s);
        assert!(r.det < 1e-12 && r.frozen_in < 1e-12, "{r:?}");
    }

    #[test]
    fn axis_mode_is_incompatible() {
        let g = grid();
        // H₀ = ∇⊥cos(ξ₂x₂): β depends on x₂ only, no periodic γ exists
        let h = single_mode_field(g, (0, 3), 1e-3, 0.0);
        assert!(matches!(
            label_map_from_field(&h),
            Err(SolverError::IncompatibleMagneticData { .. })
        ));
    }

    #[test]
    fn generator_map_is_area_preserving() {
        // the labels are not band-limited; on 64² the truncated tail is far
        // below roundoff at this amplitude
        let g = Grid::square(64, DEFAULT_LENGTH).unwrap();
        let a = random_label_map(g, 5, 1e-3).unwrap();
        let mut s = MHDState::equilibrium(g);
        s.h = field_from_gradient(&a);
        s.a = a;
        let r = residuals(&s);
        assert!(r.det < 1e-12, "{r:?}");
        assert!(r.grad_struct < 1e-13 && r.frozen_in < 1e-12, "{r:?}");
    }

    #[test]
    fn random_init_meets_tolerances() {
        let g = Grid::square(64, DEFAULT_LENGTH).unwrap();
        let mut cfg = SolverConfig::default_for(g, 1e-3, 0.0);
        cfg.init.kind = InitKind::Random;
        cfg.init.amplitude = 1e-3;
        cfg.init.seed = 3;
        let s = init_state(&cfg).unwrap();
        assert!((vector_max_abs(&s.u) - 1e-3).abs() < 1e-9);
        // too coarse a grid cannot hold the label map at this amplitude
        cfg.grid = Grid::square(16, DEFAULT_LENGTH).unwrap();
        cfg.init.amplitude = 1e-2;
        assert!(matches!(
            init_state(&cfg),
            Err(SolverError::InitResidual { .. })
        ));
        cfg.grid = g;
        cfg.init.amplitude = 1e-3;
        assert!(s.h.l2_norm() > 0.0);
        cfg.init.kind = InitKind::SingleMode;
        cfg.init.mode = (2, -1);
        let s = init_state(&cfg).unwrap();
        let a = s.a_pert();
        assert!((&s.h.x - &a[1][1]).l2_norm() < 1e-12 * s.h.l2_norm());
        assert!((&s.h.y + &a[1][0]).l2_norm() < 1e-12 * s.h.l2_norm());
    }
}
