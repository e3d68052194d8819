use ndarray::Array2;

use super::{DyadicLayout, LpError};
use crate::spectral::{from_physical, products::product_padded, SpectralField};

/// Paraproduct pieces of `fg`, represented on the 2x refined grid.
#[derive(Debug, Clone)]
pub struct Bony {
    /// `T(f,g) = Σ_j S_{j−1}f Δ_j g`
    pub t: SpectralField,
    /// `T̄(f,g) = T(g,f)`
    pub tbar: SpectralField,
    /// `R(f,g) = Σ_j Δ_j f Δ̃_j g`
    pub r: SpectralField,
}

impl Bony {
    pub fn sum(&self) -> SpectralField {
        &(&self.t + &self.tbar) + &self.r
    }
}

/// Decompose `fg` into `T + T̄ + R`.
///
/// Products are taken on the 2x zero-padded grid, so the pieces add up to the
/// pointwise product exactly up to rounding. Means are carried along: the
/// low-pass factors include them, and the mean-mean product lands in `R`.
pub fn bony_decompose(f: &SpectralField, g: &SpectralField) -> Result<Bony, LpError> {
    let layout = DyadicLayout::new(f.grid().refined(2));
    bony_decompose_with(&layout, f, g)
}

/// As [`bony_decompose`] with a prebuilt layout for the refined grid.
pub fn bony_decompose_with(
    fine: &DyadicLayout,
    f: &SpectralField,
    g: &SpectralField,
) -> Result<Bony, LpError> {
    f.grid().check_same(g.grid())?;
    let grid = *fine.grid();
    f.grid().refined(2).check_same(&grid)?;
    let fp = f.padded(grid)?;
    let gp = g.padded(grid)?;
    let shells: Vec<i32> = fine.q_range().collect();
    let blocks = |h: &SpectralField| -> Vec<Array2<f64>> {
        shells
            .iter()
            .map(|&q| fine.block(h, q).to_samples())
            .collect()
    };
    let df = blocks(&fp);
    let dg = blocks(&gp);
    let fbar = fp.mean().re;
    let gbar = gp.mean().re;
    let shape = grid.shape();
    let mut t = Array2::<f64>::zeros(shape);
    let mut tbar = Array2::<f64>::zeros(shape);
    let mut r = Array2::<f64>::from_elem(shape, fbar * gbar);
    // S_{j−1} = mean + Σ_{p ≤ j−2} Δ_p, built up as j advances
    let mut lf = Array2::<f64>::from_elem(shape, fbar);
    let mut lg = Array2::<f64>::from_elem(shape, gbar);
    let n = shells.len();
    for j in 0..n {
        if j >= 2 {
            lf += &df[j - 2];
            lg += &dg[j - 2];
        }
        t += &(&lf * &dg[j]);
        tbar += &(&lg * &df[j]);
        let mut near = dg[j].clone();
        if j >= 1 {
            near += &dg[j - 1];
        }
        if j + 1 < n {
            near += &dg[j + 1];
        }
        r += &(&df[j] * &near);
    }
    Ok(Bony {
        t: from_physical(grid, &t),
        tbar: from_physical(grid, &tbar),
        r: from_physical(grid, &r),
    })
}

/// `‖T + T̄ + R − fg‖ / ‖fg‖`.
pub fn bony_reconstruction_error(f: &SpectralField, g: &SpectralField) -> Result<f64, LpError> {
    let parts = bony_decompose(f, g)?;
    let fg = product_padded(f, g)?;
    let scale = fg.l2_norm();
    let err = (&parts.sum() - &fg).l2_norm();
    Ok(if scale == 0.0 { err } else { err / scale })
}
