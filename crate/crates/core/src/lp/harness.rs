//! Empirical constants behind the embedding and product inequalities.
//!
//! Nothing here asserts a bound. Each routine returns the measured quotient of
//! the two sides so that sweeps can report the largest value observed.

use num_complex::Complex64;

use super::{DyadicLayout, LpError};
use crate::spectral::products::product_padded;
use crate::spectral::{Axis, Grid, SpectralField, VectorField};

/// `‖f‖_{L∞} / ‖f‖_{B̃^{0,1}}` on the grid values of `f`.
pub fn linf_embedding_ratio(layout: &DyadicLayout, f: &SpectralField) -> Result<f64, LpError> {
    let table = layout.checked_table(&[f])?;
    if f.l2_norm() == 0.0 {
        return Err(LpError::ZeroField);
    }
    let hybrid = table.hybrid(0.0, 1.0);
    if hybrid == 0.0 {
        return Err(LpError::AxisOnly);
    }
    Ok(f.max_abs() / hybrid)
}

/// Which product inequality to measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductLaw {
    /// `‖fg‖_{B̂^{s+t−1}} ≲ ‖f‖_{B̂^s} ‖g‖_{B̂^t}` for `s, t ≤ 1`, `s + t > 0`.
    Hat { s: f64, t: f64 },
    /// `‖fg‖_{B̃^{0,1}} ≲ ‖f‖_{B̃^{0,1}} ‖g‖_{B̂^1}`.
    Hybrid,
}

impl ProductLaw {
    pub fn validate(&self) -> Result<(), LpError> {
        if let ProductLaw::Hat { s, t } = *self {
            if !(s <= 1.0 && t <= 1.0) {
                return Err(LpError::Parameters("s<=1 and t<=1"));
            }
            if !(s + t > 0.0) {
                return Err(LpError::Parameters("s+t>0"));
            }
        }
        Ok(())
    }
}

/// Measures product-law quotients for fields on one grid.
///
/// The product `fg` is formed exactly on the 2x refined grid and all norms are
/// evaluated there; the shells depend on `ξ` alone, so the norms of `f` and
/// `g` agree with those on the base grid. The mean of `fg` is dropped, as the
/// homogeneous norms quotient it out.
#[derive(Debug, Clone)]
pub struct ProductLawHarness {
    base: Grid,
    fine: DyadicLayout,
}

impl ProductLawHarness {
    pub fn new(base: Grid) -> Self {
        Self {
            base,
            fine: DyadicLayout::new(base.refined(2)),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.base
    }

    pub fn ratio(
        &self,
        law: ProductLaw,
        f: &SpectralField,
        g: &SpectralField,
    ) -> Result<f64, LpError> {
        law.validate()?;
        self.base.check_same(f.grid())?;
        self.base.check_same(g.grid())?;
        let fine = *self.fine.grid();
        let fp = f.padded(fine)?;
        let gp = g.padded(fine)?;
        let fg = product_padded(f, g)?.without_mean();
        let tf = self.fine.checked_table(&[&fp])?;
        let tg = self.fine.checked_table(&[&gp])?;
        let tfg = self.fine.table(&[&fg]);
        let (lhs, rhs) = match law {
            ProductLaw::Hat { s, t } => (tfg.hat(s + t - 1.0), tf.hat(s) * tg.hat(t)),
            ProductLaw::Hybrid => (tfg.hybrid(0.0, 1.0), tf.hybrid(0.0, 1.0) * tg.hat(1.0)),
        };
        if lhs == 0.0 {
            return Ok(0.0);
        }
        if rhs == 0.0 {
            return Err(LpError::ZeroDenominator);
        }
        Ok(lhs / rhs)
    }

    /// Largest quotient over the given pairs.
    pub fn max_ratio<'a>(
        &self,
        law: ProductLaw,
        pairs: impl IntoIterator<Item = (&'a SpectralField, &'a SpectralField)>,
    ) -> Result<f64, LpError> {
        let mut worst: f64 = 0.0;
        for (f, g) in pairs {
            worst = worst.max(self.ratio(law, f, g)?);
        }
        Ok(worst)
    }
}

/// One cell of the commutator table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorEntry {
    pub q: i32,
    pub k: i32,
    /// `|(G(D)Δ_qΔ_k¹(e·∇f) | G(D)Δ_qΔ_k¹ f)|`
    pub value: f64,
}

/// Raw convective pairings `|(G(D)Δ_qΔ_k¹(e·∇f) | G(D)Δ_qΔ_k¹f)|` with
/// `G(ξ) = |ξ|^m ξ₁^n`, for every active block. No bound is attached.
pub fn commutator_table(
    layout: &DyadicLayout,
    e: &VectorField,
    f: &SpectralField,
    m: f64,
    n: i32,
) -> Result<Vec<CommutatorEntry>, LpError> {
    let grid = *layout.grid();
    grid.check_same(e.grid())?;
    grid.check_same(f.grid())?;
    let conv =
        &product_padded(&e.x, &f.partial(Axis::X1))? + &product_padded(&e.y, &f.partial(Axis::X2))?;
    // only modes of the base grid meet Δ_qΔ_k¹f in the pairing
    let conv = conv.truncated(grid)?;
    let symbol = |idx: usize| {
        if idx == 0 {
            return 0.0;
        }
        let (a, b) = grid.xi(idx);
        a.hypot(b).powf(m) * a.powi(n)
    };
    let mut out = Vec::new();
    for q in layout.q_range() {
        for k in layout.k_range() {
            if !layout.is_active(q, k) {
                continue;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for idx in 0..grid.len() {
                let w = layout.weights_product(idx, q, k);
                if w == 0.0 {
                    continue;
                }
                let g = symbol(idx) * w;
                acc += conv.coeffs()[idx] * g * (f.coeffs()[idx] * g).conj();
            }
            out.push(CommutatorEntry {
                q,
                k,
                value: acc.re.abs(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::real_mode;
    use crate::spectral::random::gaussian;
    use crate::spectral::DEFAULT_LENGTH;

    fn grid() -> Grid {
        Grid::square(32, DEFAULT_LENGTH).unwrap()
    }

    #[test]
    fn parameter_checks_name_the_condition() {
        let err = ProductLaw::Hat { s: -0.5, t: 0.2 }.validate().unwrap_err();
        assert!(err.to_string().contains("s+t>0"));
        assert!(ProductLaw::Hat { s: 1.5, t: 0.2 }.validate().is_err());
        assert!(ProductLaw::Hat { s: 1.0, t: 1.0 }.validate().is_ok());
    }

    #[test]
    fn zero_factor_and_scaling() {
        let g = grid();
        let h = ProductLawHarness::new(g);
        let a = gaussian(g, 1, 0.5, true);
        let b = gaussian(g, 2, 0.5, true);
        let law = ProductLaw::Hat { s: 1.0, t: 1.0 };
        assert_eq!(h.ratio(law, &SpectralField::zeros(g), &b).unwrap(), 0.0);
        let r1 = h.ratio(law, &a, &b).unwrap();
        let r2 = h.ratio(law, &a.scaled(3.0), &b).unwrap();
        assert!(r1 > 0.0 && r1.is_finite());
        assert!((r1 - r2).abs() <= 1e-12 * r1);
        let q = h.ratio(ProductLaw::Hybrid, &a, &b).unwrap();
        assert!(q > 0.0 && q.is_finite());
    }

    #[test]
    fn linf_ratio_is_scale_free() {
        let lay = DyadicLayout::new(grid());
        let f = real_mode(*lay.grid(), 5, 3, 1.0);
        let r = linf_embedding_ratio(&lay, &f).unwrap();
        assert!(r > 0.0 && r.is_finite());
        let r2 = linf_embedding_ratio(&lay, &f.scaled(2.0)).unwrap();
        assert!((r - r2).abs() < 1e-14 * r);
        assert!(matches!(
            linf_embedding_ratio(&lay, &SpectralField::zeros(*lay.grid())),
            Err(LpError::ZeroField)
        ));
    }

    #[test]
    fn commutator_vanishes_for_constant_transport() {
        let lay = DyadicLayout::new(grid());
        let g = *lay.grid();
        let f = gaussian(g, 3, 0.5, true);
        // a constant drift commutes with every multiplier; the pairing is
        // (iξ·c)|ĝ|² summed, purely imaginary
        let e = VectorField::new(
            SpectralField::constant(g, 0.7),
            SpectralField::constant(g, -0.2),
        )
        .unwrap();
        let rows = commutator_table(&lay, &e, &f, 1.0, 1).unwrap();
        let scale = f.l2_norm().powi(2);
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.value < 1e-12 * scale));
    }
}
