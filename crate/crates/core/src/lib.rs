//! Pseudo-spectral toolkit for two-dimensional incompressible MHD with zero
//! magnetic diffusivity on a doubly periodic box.
//!
//! - [`spectral`]: grids, transforms, Fourier multipliers, projection, dealiasing.
//! - [`lp`]: Littlewood-Paley blocks, Besov-type norms, paraproducts.
//! - [`linear`]: symbol, eigenvalues and exact propagator of the linearization.
//! - [`solver`]: the evolution of `(u, H, A)` and its configuration.
//! - [`diagnostics`]: invariant residuals, energy functionals, budgets, `X(t)`.

// `!(x <= y)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod linear;
pub mod lp;
pub mod solver;
pub mod spectral;

pub use spectral::{Axis, Grid, SpectralError, SpectralField, VectorField};
