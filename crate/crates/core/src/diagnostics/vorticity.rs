//! `ω = Λ⁻¹ curl u` and the residual of its evolution equation
//! `∂ₜω − Δω − ΛH₂ = Λ⁻¹curl(H·∇H − u·∇u)`.

use crate::solver::quadratic_force;
use crate::solver::MHDState;
use crate::spectral::products::ProductSpace;
use crate::spectral::{SpectralField, VectorField};

/// `Λ⁻¹(∂₂u₁ − ∂₁u₂)`, zero mean.
pub fn vorticity(u: &VectorField) -> SpectralField {
    u.curl().lambda_pow(-1.0)
}

/// `Λ⁻¹curl(H·∇H − u·∇u)` with dealiased products.
pub fn vorticity_source(s: &MHDState) -> SpectralField {
    vorticity(&quadratic_force(&ProductSpace::new(*s.grid()), s))
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VorticityError {
    #[error("vorticity residual needs at least 3 snapshots, got {found}")]
    TooFewSnapshots { found: usize },
    #[error("snapshot times must increase strictly")]
    NonIncreasingTime,
}

/// Per-snapshot RMS residual of the vorticity equation, with `∂ₜω` from the
/// three-point second-order stencil (centered inside the window, one-sided
/// at its ends) on possibly uneven time levels.
pub fn vorticity_equation_residuals(window: &[MHDState]) -> Result<Vec<f64>, VorticityError> {
    let n = window.len();
    if n < 3 {
        return Err(VorticityError::TooFewSnapshots { found: n });
    }
    if window.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(VorticityError::NonIncreasingTime);
    }
    let omega: Vec<SpectralField> = window.iter().map(|s| vorticity(&s.u)).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = i.clamp(1, n - 2);
        let (ta, tb, tc) = (window[c - 1].t, window[c].t, window[c + 1].t);
        let t = window[i].t;
        // derivative at t of the quadratic through the three levels
        let wa = (2.0 * t - tb - tc) / ((ta - tb) * (ta - tc));
        let wb = (2.0 * t - ta - tc) / ((tb - ta) * (tb - tc));
        let wc = (2.0 * t - ta - tb) / ((tc - ta) * (tc - tb));
        let mut dt = omega[c - 1].scaled(wa);
        dt.axpy(wb, &omega[c]);
        dt.axpy(wc, &omega[c + 1]);
        let s = &window[i];
        let rhs = &(&omega[i].laplacian() + &s.h.y.lambda_pow(1.0)) + &vorticity_source(s);
        out.push((&dt - &rhs).l2_norm());
    }
    Ok(out)
}

/// Largest entry of [`vorticity_equation_residuals`].
pub fn vorticity_equation_residual(window: &[MHDState]) -> Result<f64, VorticityError> {
    Ok(vorticity_equation_residuals(window)?
        .into_iter()
        .fold(0.0, f64::max))
}
