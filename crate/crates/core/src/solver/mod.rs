//! Pseudo-spectral integration of the perturbed MHD system around `h₀ = e₁`
//! together with the inverse deformation gradient `A`.

pub mod config;
pub mod init;
mod run;
pub mod state;
mod step;
mod tendency;

pub use config::{parse_real, ConfigError, InitConfig, InitKind, SolverConfig};
pub use init::init_state;
pub use run::{run, RunEvent};
pub use state::{MHDState, MatrixField};
pub use step::{stability_limit, Stepper};
pub use tendency::{pressure_diagnostic, quadratic_force, tendency, Physics, Tendency};

use crate::spectral::snapshot::SnapshotError;
use crate::spectral::SpectralError;

/// State of a run at the point it stopped producing finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowUpReport {
    /// Time of the last finite state.
    pub t: f64,
    /// Steps completed before the failure.
    pub step: usize,
    pub reason: String,
    pub max_u: f64,
    pub max_h: f64,
    pub max_a: f64,
}

impl std::fmt::Display for BlowUpReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "blow-up after step {} (t = {}): {}; last finite max|u| = {:.3e}, max|H| = {:.3e}, max|A - I| = {:.3e}",
            self.step, self.t, self.reason, self.max_u, self.max_h, self.max_a
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("initial magnetic field is not divergence-free (|div H| = {divergence:.3e})")]
    DivergentMagneticData { divergence: f64 },
    #[error(
        "initial magnetic field has no periodic label map: determinant constraint leaves \
         relative residual {residual:.3e} on modes with xi1 = 0"
    )]
    IncompatibleMagneticData { residual: f64 },
    #[error(
        "label map iteration did not converge in {iterations} iterations; use smaller initial data"
    )]
    InitNonConvergence { iterations: usize },
    #[error("initial state misses the {which} tolerance: residual {value:.3e}")]
    InitResidual { which: &'static str, value: f64 },
    #[error("time step {dt} exceeds the stability limit {limit:.6e}")]
    StabilityLimit { dt: f64, limit: f64 },
    #[error("{0}")]
    BlowUp(Box<BlowUpReport>),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Snapshot(#[from] SnapshotError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
