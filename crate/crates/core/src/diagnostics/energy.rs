//! Block energy functionals `f_{q,k}` of the linearized `(u, v)` system.
//!
//! With `b = Δ_qΔ_k¹`, summed over vector components:
//!
//! - regime 1 (`k + 1 ≥ 2q`): `f² = ‖bu‖² + ‖bv‖² − ι 2^{2q−2k+1} (bu | b∂₁v)`;
//! - regime 2: `f² = 2‖bℛ₁²u‖² + ‖b∂₁v‖² + 2(bℛ₁²u | b∂₁v)`,
//!
//! where `ℛ₁` has symbol `iξ₁/|ξ|`.

use num_complex::Complex64;

use super::DiagnosticsError;
use crate::lp::{is_regime1, DyadicLayout};
use crate::spectral::VectorField;

pub const DEFAULT_IOTA: f64 = 0.1;

/// Largest `ι` for which every regime-1 form on the layout stays positive
/// definite. Per mode the form is `|u|² + |v|² − c Re(u conj(iξ₁v))` up to the
/// block weight, which is positive exactly when `c|ξ₁| < 2`.
pub fn iota_max(layout: &DyadicLayout) -> f64 {
    let grid = layout.grid();
    let mut best = f64::INFINITY;
    for idx in 1..grid.len() {
        let (d1, _) = grid.derivative_xi(idx);
        if d1 == 0.0 {
            continue;
        }
        for &(q, _) in layout.iso_weights(idx).as_slice() {
            for &(k, _) in layout.x1_weights(idx).as_slice() {
                if is_regime1(q, k) {
                    let c = 2f64.powi(2 * q - 2 * k + 1);
                    best = best.min(2.0 / (c * d1.abs()));
                }
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyFunctionalParams {
    iota: f64,
}

impl EnergyFunctionalParams {
    /// Accepts `ι ∈ (0, iota_max(layout))`.
    pub fn new(layout: &DyadicLayout, iota: f64) -> Result<Self, DiagnosticsError> {
        let max = iota_max(layout);
        if !(iota > 0.0 && iota < max) {
            return Err(DiagnosticsError::Iota { iota, max });
        }
        Ok(Self { iota })
    }

    pub fn default_for(layout: &DyadicLayout) -> Result<Self, DiagnosticsError> {
        Self::new(layout, DEFAULT_IOTA)
    }

    pub fn iota(&self) -> f64 {
        self.iota
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyValue {
    /// `f_{q,k} ≥ 0`; zero for an inactive block.
    pub value: f64,
    pub active: bool,
    pub regime1: bool,
}

/// `f_{q,k}` for velocity `u` and magnetic perturbation `v`.
pub fn energy_functional(
    layout: &DyadicLayout,
    u: &VectorField,
    v: &VectorField,
    q: i32,
    k: i32,
    params: &EnergyFunctionalParams,
) -> Result<EnergyValue, DiagnosticsError> {
    let grid = *layout.grid();
    grid.check_same(u.grid())?;
    grid.check_same(v.grid())?;
    let regime1 = is_regime1(q, k);
    if !layout.is_active(q, k) {
        return Ok(EnergyValue {
            value: 0.0,
            active: false,
            regime1,
        });
    }
    let cross = params.iota * 2f64.powi(2 * q - 2 * k + 1);
    let mut f2 = 0.0;
    for (uc, vc) in [(&u.x, &v.x), (&u.y, &v.y)] {
        for idx in 1..grid.len() {
            let w = layout.weights_product(idx, q, k);
            if w == 0.0 {
                continue;
            }
            let (d1, _) = grid.derivative_xi(idx);
            let bu = uc.coeffs()[idx] * w;
            let bv = vc.coeffs()[idx] * w;
            let dv = bv * Complex64::new(0.0, d1);
            f2 += if regime1 {
                bu.norm_sqr() + bv.norm_sqr() - cross * (bu * dv.conj()).re
            } else {
                let r = bu * (-d1 * d1 / grid.xi_norm(idx).powi(2));
                2.0 * r.norm_sqr() + dv.norm_sqr() + 2.0 * (r * dv.conj()).re
            };
        }
    }
    Ok(EnergyValue {
        value: f2.max(0.0).sqrt(),
        active: true,
        regime1,
    })
}
