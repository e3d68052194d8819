//! Pointwise products of spectral fields.
//!
//! [`ProductSpace`] is the workhorse: fields are truncated to the two-thirds
//! band, sent to a physical grid on which a quadratic product of band-limited
//! inputs has no alias landing back inside the band, multiplied there, and
//! brought back with the band truncation reapplied. When neither `n1` nor `n2`
//! is divisible by 3 the base grid already has that property; otherwise the
//! products are formed on the 2x refined grid.

use ndarray::Array2;

use super::{from_physical, Grid, SpectralError, SpectralField};

/// Physical grid used for dealiased quadratic products on `grid`.
#[derive(Debug, Clone, Copy)]
pub struct ProductSpace {
    grid: Grid,
    work: Grid,
}

impl ProductSpace {
    pub fn new(grid: Grid) -> Self {
        let work = if !grid.n1().is_multiple_of(3) && !grid.n2().is_multiple_of(3) {
            grid
        } else {
            grid.refined(2)
        };
        Self { grid, work }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Grid values of the band-truncated field on the work grid.
    pub fn to_physical(&self, f: &SpectralField) -> Array2<f64> {
        let band = f.dealias();
        if self.work == self.grid {
            band.to_samples()
        } else {
            band.padded(self.work)
                .expect("work grid refines base grid")
                .to_samples()
        }
    }

    /// Coefficients on the base grid, truncated to the two-thirds band.
    pub fn from_physical(&self, samples: &Array2<f64>) -> SpectralField {
        let f = from_physical(self.work, samples);
        let f = if self.work == self.grid {
            f
        } else {
            f.truncated(self.grid).expect("same periods")
        };
        f.dealias()
    }

    pub fn product(&self, a: &SpectralField, b: &SpectralField) -> SpectralField {
        let pa = self.to_physical(a);
        let pb = self.to_physical(b);
        self.from_physical(&(pa * pb))
    }
}

/// Dealiased product: equals the exact product of the band-truncated inputs,
/// truncated to the band.
pub fn product_dealiased(
    a: &SpectralField,
    b: &SpectralField,
) -> Result<SpectralField, SpectralError> {
    a.grid().check_same(b.grid())?;
    Ok(ProductSpace::new(*a.grid()).product(a, b))
}

/// Product of the full (unfiltered) trigonometric interpolants, represented on
/// the 2x refined grid; its samples there equal the pointwise product.
pub fn product_padded(
    a: &SpectralField,
    b: &SpectralField,
) -> Result<SpectralField, SpectralError> {
    a.grid().check_same(b.grid())?;
    let fine = a.grid().refined(2);
    let pa = a.padded(fine)?.to_samples();
    let pb = b.padded(fine)?.to_samples();
    Ok(from_physical(fine, &(pa * pb)))
}

/// Plain collocation product on the base grid (aliasing included).
pub fn product_aliased(
    a: &SpectralField,
    b: &SpectralField,
) -> Result<SpectralField, SpectralError> {
    a.grid().check_same(b.grid())?;
    Ok(from_physical(*a.grid(), &(a.to_samples() * b.to_samples())))
}
