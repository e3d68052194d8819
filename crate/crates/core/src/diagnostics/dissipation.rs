//! The magnetic dissipation identity carried by the deformation gradient.
//!
//! For `𝒜 = ∇α − I` with `det(I + 𝒜) = 1`, `H₁ = 𝒜₂₂` and `H₂ = −𝒜₂₁`,
//!
//! ```text
//! ‖∇H‖² = −(∂₁H | div 𝒜) − Σ_j (∂_j det 𝒜 | ∂_j ∂₂α₂)
//! ```
//!
//! with `(div 𝒜)_i = Σ_j ∂_j 𝒜_ij` and `∂₂α₂ = 1 + 𝒜₂₂`. The form that also
//! places `‖∇H₁‖²` on the left is available as [`verbatim_residual`]; it does
//! not balance: on a plane wave its left side exceeds the right by
//! exactly `‖∇H₁‖²`.

use super::DiagnosticsError;
use crate::solver::init::field_from_gradient;
use crate::solver::MatrixField;
use crate::spectral::products::product_padded;
use crate::spectral::{Axis, SpectralField};

/// Structural tolerance required by [`dissipation_identity_residual`].
pub const HYPOTHESIS_TOLERANCE: f64 = 1e-10;

/// Both sides of the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentitySides {
    /// `‖∇H‖²`
    pub lhs: f64,
    /// `−(∂₁H | div𝒜)`
    pub transport: f64,
    /// `−Σ_j (∂_j det𝒜 | ∂_j∂₂α₂)`
    pub determinant: f64,
    /// `‖∇H₁‖²`, the extra term of the verbatim form.
    pub grad_h1_sq: f64,
}

impl IdentitySides {
    pub fn rhs(&self) -> f64 {
        self.transport + self.determinant
    }

    pub fn relative_residual(&self) -> f64 {
        (self.lhs - self.rhs()).abs() / self.lhs.max(f64::MIN_POSITIVE)
    }
}

fn grad_sq(f: &SpectralField) -> f64 {
    f.partial(Axis::X1).l2_norm().powi(2) + f.partial(Axis::X2).l2_norm().powi(2)
}

/// Evaluates both sides for the given `A` (full matrix, `A = I + 𝒜`), with
/// the determinant formed exactly on the 2x refined grid.
pub fn identity_sides(a: &MatrixField) -> Result<IdentitySides, DiagnosticsError> {
    let mut p = a.clone();
    p[0][0].coeffs_mut()[0] -= 1.0;
    p[1][1].coeffs_mut()[0] -= 1.0;
    let h = field_from_gradient(a);
    let lhs = grad_sq(&h.x) + grad_sq(&h.y);
    let div = |i: usize| &p[i][0].partial(Axis::X1) + &p[i][1].partial(Axis::X2);
    let transport = -(h.x.partial(Axis::X1).inner(&div(0)) + h.y.partial(Axis::X1).inner(&div(1)));
    let det = &product_padded(&p[0][0], &p[1][1])? - &product_padded(&p[0][1], &p[1][0])?;
    let fine = *det.grid();
    let a22 = p[1][1].padded(fine)?;
    let determinant = -[Axis::X1, Axis::X2]
        .into_iter()
        .map(|ax| det.partial(ax).inner(&a22.partial(ax)))
        .sum::<f64>();
    Ok(IdentitySides {
        lhs,
        transport,
        determinant,
        grad_h1_sq: grad_sq(&h.x),
    })
}

/// `|LHS − RHS| / LHS` without checking the hypotheses.
pub fn dissipation_identity_residual_unchecked(a: &MatrixField) -> Result<f64, DiagnosticsError> {
    Ok(identity_sides(a)?.relative_residual())
}

/// As the unchecked form, after verifying that the rows of `A` are curl-free
/// and `det A = 1` pointwise to [`HYPOTHESIS_TOLERANCE`].
pub fn dissipation_identity_residual(a: &MatrixField) -> Result<f64, DiagnosticsError> {
    let curl = (0..2)
        .map(|i| (&a[i][0].partial(Axis::X2) - &a[i][1].partial(Axis::X1)).max_abs())
        .fold(0.0, f64::max);
    if !(curl <= HYPOTHESIS_TOLERANCE) {
        return Err(DiagnosticsError::Hypothesis {
            which: "gradient structure (curl of a row of A)",
            value: curl,
        });
    }
    let s: Vec<_> = a.iter().flatten().map(SpectralField::to_samples).collect();
    let det = (&s[0] * &s[3] - &s[1] * &s[2])
        .iter()
        .fold(0.0_f64, |m, v| m.max((v - 1.0).abs()));
    if !(det <= HYPOTHESIS_TOLERANCE) {
        return Err(DiagnosticsError::Hypothesis {
            which: "unit determinant (det A = 1)",
            value: det,
        });
    }
    dissipation_identity_residual_unchecked(a)
}

/// Relative residual of the form with `‖∇H‖² + ‖∇H₁‖²` on the left.
pub fn verbatim_residual(a: &MatrixField) -> Result<f64, DiagnosticsError> {
    let s = identity_sides(a)?;
    let lhs = s.lhs + s.grad_h1_sq;
    Ok((lhs - s.rhs()).abs() / lhs.max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::init::{label_map_from_field, single_mode_field};
    use crate::solver::state::identity_matrix;
    use crate::spectral::{Grid, DEFAULT_LENGTH};

    fn grid() -> Grid {
        Grid::square(32, DEFAULT_LENGTH).unwrap()
    }

    #[test]
    fn identity_gives_zero() {
        let s = identity_sides(&identity_matrix(grid())).unwrap();
        assert_eq!((s.lhs, s.rhs()), (0.0, 0.0));
        assert_eq!(
            dissipation_identity_residual(&identity_matrix(grid())).unwrap(),
            0.0
        );
    }

    #[test]
    fn plane_wave_balances_and_verbatim_does_not() {
        let g = grid();
        let a = label_map_from_field(&single_mode_field(g, (3, 2), 1e-3, 0.0)).unwrap();
        assert!(dissipation_identity_residual(&a).unwrap() < 1e-12);
        let s = identity_sides(&a).unwrap();
        let v = verbatim_residual(&a).unwrap();
        assert!((v - s.grad_h1_sq / (s.lhs + s.grad_h1_sq)).abs() < 1e-10);
        assert!(v > 0.1);
    }

    #[test]
    fn broken_determinant_is_named() {
        let g = grid();
        let mut a = label_map_from_field(&single_mode_field(g, (3, 2), 1e-3, 0.0)).unwrap();
        a[0][0].coeffs_mut()[0] += 1e-6;
        let err = dissipation_identity_residual(&a).unwrap_err();
        assert!(err.to_string().contains("det A = 1"), "{err}");
        assert!(dissipation_identity_residual_unchecked(&a)
            .unwrap()
            .is_finite());
    }
}
