//! Littlewood-Paley analysis on the torus: dyadic bumps, isotropic blocks
//! `Δ_q`, `x₁`-blocks `Δ_k¹`, Besov, hat-Besov and hybrid norms, the Bony
//! paraproduct and empirical product-law harnesses.
//!
//! The torus stands in for the plane. Only shells realized by some grid
//! frequency exist, and the mean is outside every homogeneous norm.

mod bony;
pub mod bump;
mod harness;
mod layout;

pub use bony::{bony_decompose, bony_decompose_with, bony_reconstruction_error, Bony};
pub use harness::{
    commutator_table, linf_embedding_ratio, CommutatorEntry, ProductLaw, ProductLawHarness,
};
#[cfg(test)]
pub(crate) use layout::real_mode;
pub use layout::{hybrid_weight, is_regime1, BlockTable, DyadicLayout, MEAN_TOLERANCE};

use crate::spectral::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("homogeneous norm is undefined on a field with nonzero mean ({mean:e})")]
    NonZeroMean { mean: f64 },
    #[error("field is zero")]
    ZeroField,
    #[error("field has no content outside the xi1 = 0 axis, hybrid norm vanishes")]
    AxisOnly,
    #[error("parameter range violated: requires {0}")]
    Parameters(&'static str),
    #[error("right-hand side norm vanishes while the left side does not")]
    ZeroDenominator,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
