use std::io::{Read, Write};

use crate::spectral::snapshot::{read_snapshot, write_snapshot, SnapshotError};
use crate::spectral::{Grid, SpectralField, VectorField};

/// Field tags in snapshot order.
pub const FIELD_TAGS: [&str; 8] = ["u.x", "u.y", "H.x", "H.y", "A11", "A12", "A21", "A22"];

/// `2×2` matrix of scalar fields, `a[i][j] = A_{ij}`.
pub type MatrixField = [[SpectralField; 2]; 2];

/// Velocity `u`, magnetic perturbation `H` (with `B = h₀ + H`, `h₀ = e₁`)
/// and the full inverse deformation gradient `A = I + 𝒜` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct MHDState {
    pub u: VectorField,
    pub h: VectorField,
    pub a: MatrixField,
    pub t: f64,
}

pub fn identity_matrix(grid: Grid) -> MatrixField {
    let one = SpectralField::constant(grid, 1.0);
    let zero = SpectralField::zeros(grid);
    [[one.clone(), zero.clone()], [zero, one]]
}

impl MHDState {
    /// The equilibrium `u = 0`, `H = 0`, `A = I`.
    pub fn equilibrium(grid: Grid) -> Self {
        Self {
            u: VectorField::zeros(grid),
            h: VectorField::zeros(grid),
            a: identity_matrix(grid),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// `𝒜 = A − I`.
    pub fn a_pert(&self) -> MatrixField {
        let mut p = self.a.clone();
        for (i, row) in p.iter_mut().enumerate() {
            row[i].coeffs_mut()[0] -= 1.0;
        }
        p
    }

    pub fn a_components(&self) -> [&SpectralField; 4] {
        [&self.a[0][0], &self.a[0][1], &self.a[1][0], &self.a[1][1]]
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite()
            && self.h.is_finite()
            && self.a.iter().flatten().all(SpectralField::is_finite)
            && self.t.is_finite()
    }

    pub fn write_snapshot<W: Write>(&self, w: W) -> Result<(), SnapshotError> {
        let fields = [
            &self.u.x,
            &self.u.y,
            &self.h.x,
            &self.h.y,
            &self.a[0][0],
            &self.a[0][1],
            &self.a[1][0],
            &self.a[1][1],
        ];
        let tagged: Vec<(&str, &SpectralField)> = FIELD_TAGS.iter().copied().zip(fields).collect();
        write_snapshot(w, self.grid(), self.t, &tagged)
    }

    pub fn read_snapshot<R: Read>(r: R) -> Result<Self, SnapshotError> {
        let snap = read_snapshot(r)?;
        let get = |tag: &str| snap.field(tag).cloned();
        Ok(Self {
            u: VectorField::new(get("u.x")?, get("u.y")?)?,
            h: VectorField::new(get("H.x")?, get("H.y")?)?,
            a: [[get("A11")?, get("A12")?], [get("A21")?, get("A22")?]],
            t: snap.time,
        })
    }
}
