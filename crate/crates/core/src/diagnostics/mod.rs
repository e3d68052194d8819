//! Invariant residuals, norm ledgers, energy functionals and budgets.

pub mod budget;
pub mod dissipation;
pub mod energy;
pub mod invariants;
pub mod ledger;
pub mod report;
pub mod vorticity;

pub use budget::{dissipation_budget, DissipationBudget};
pub use dissipation::{
    dissipation_identity_residual, dissipation_identity_residual_unchecked, identity_sides,
    verbatim_residual, IdentitySides,
};
pub use energy::{energy_functional, iota_max, EnergyFunctionalParams, EnergyValue, DEFAULT_IOTA};
pub use invariants::{residuals, Residuals};
pub use ledger::{
    read_full_csv, read_ledger_csv, write_full_csv, write_ledger_csv, x_of_t, LedgerError,
    LedgerRow, NormLedger, FULL_COLUMNS, LEDGER_COLUMNS,
};
pub use report::report_text;
pub use vorticity::{
    vorticity, vorticity_equation_residual, vorticity_equation_residuals, VorticityError,
};

use crate::lp::LpError;
use crate::spectral::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("hypothesis violated: {which}, residual {value:.3e}")]
    Hypothesis { which: &'static str, value: f64 },
    #[error("iota = {iota} outside (0, {max:.6})")]
    Iota { iota: f64, max: f64 },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
