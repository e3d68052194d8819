//! Periodic grids, FFTs, Fourier multipliers, Leray projection and dealiasing.

mod fft;
mod field;
mod grid;
pub mod products;
pub mod random;
pub mod snapshot;

use std::fmt;

pub(crate) use field::from_physical;
pub use field::{transform_forward, transform_inverse, SpectralField, VectorField};
pub use grid::{Grid, DEFAULT_LENGTH};

/// Coordinate direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X1 => f.write_str("x1"),
            Axis::X2 => f.write_str("x2"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("sample array has {found} points along {axis}, grid expects {expected}")]
    DimensionMismatch {
        axis: Axis,
        expected: usize,
        found: usize,
    },
    #[error("coefficient array has {found} entries, grid expects {expected}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("multiplier is not finite at xi = ({xi1}, {xi2})")]
    NonFiniteSymbol { xi1: f64, xi2: f64 },
    #[error("fields live on different grids: {left:?} vs {right:?}")]
    GridMismatch { left: Grid, right: Grid },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
