//! Time-integrated dissipation and the magnetic `L²_T(B̂¹)` bound.

use super::ledger::LedgerRow;

/// Trapezoid quadrature of `f` over the rows.
pub fn trapezoid(rows: &[LedgerRow], f: impl Fn(&LedgerRow) -> f64) -> f64 {
    rows.windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (f(&w[0]) + f(&w[1])))
        .sum()
}

/// Integrals over a trajectory and both sides of the bound
/// `‖H‖²_{L²_T(B̂¹)} ≲ ‖H‖_{L^∞_T(B̃^{0,1})} I_low + ‖𝒜‖_{L^∞_T(B̂¹)} I_high`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DissipationBudget {
    pub t_end: f64,
    /// `‖u‖_{L¹_T(B̂²)}`
    pub u_hat_b2: f64,
    /// `I_low = ∫ Σ_{k+1≥2q} 2^{2q}‖Δ_qΔ_k¹H‖`
    pub h_low: f64,
    /// `I_high = ∫ Σ_{k+1<2q} ‖Δ_qΔ_k¹∂₁H‖`
    pub h_high: f64,
    /// `‖H‖²_{L²_T(B̂¹)}`, the left side.
    pub h_l2_b1_sq: f64,
    pub sup_h_hybrid: f64,
    pub sup_a_hat_b1: f64,
    /// `sup ‖H‖_{B̃^{0,1}} · I_low`
    pub rhs_low: f64,
    /// `sup ‖𝒜‖_{B̂¹} · I_high`
    pub rhs_high: f64,
    /// Largest change of an integral when every other row is dropped; zero
    /// with fewer than three rows.
    pub quadrature_error: f64,
}

impl DissipationBudget {
    pub fn rhs(&self) -> f64 {
        self.rhs_low + self.rhs_high
    }

    /// Left side over right side; `None` when the right side vanishes.
    pub fn ratio(&self) -> Option<f64> {
        let r = self.rhs();
        (r > 0.0).then(|| self.h_l2_b1_sq / r)
    }
}

fn integrals(rows: &[LedgerRow]) -> [f64; 4] {
    [
        trapezoid(rows, |r| r.hat_b2_u),
        trapezoid(rows, |r| r.h_dissipation_low),
        trapezoid(rows, |r| r.h_dissipation_high),
        trapezoid(rows, |r| r.hat_b1_h.powi(2)),
    ]
}

pub fn dissipation_budget(rows: &[LedgerRow]) -> DissipationBudget {
    let [u_hat_b2, h_low, h_high, h_l2_b1_sq] = integrals(rows);
    let sup = |f: fn(&LedgerRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let sup_h_hybrid = sup(|r| r.hybrid01_h);
    let sup_a_hat_b1 = sup(|r| r.hat_b1_a);
    let quadrature_error = if rows.len() >= 3 {
        let mut coarse: Vec<LedgerRow> = rows.iter().step_by(2).copied().collect();
        if (rows.len() - 1) % 2 == 1 {
            coarse.push(*rows.last().expect("nonempty"));
        }
        let c = integrals(&coarse);
        [u_hat_b2, h_low, h_high, h_l2_b1_sq]
            .iter()
            .zip(c)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    DissipationBudget {
        t_end: rows.last().map_or(0.0, |r| r.t),
        u_hat_b2,
        h_low,
        h_high,
        h_l2_b1_sq,
        sup_h_hybrid,
        sup_a_hat_b1,
        rhs_low: sup_h_hybrid * h_low,
        rhs_high: sup_a_hat_b1 * h_high,
        quadrature_error,
    }
}
