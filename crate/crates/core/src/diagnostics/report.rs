//! Plain-text run summary.

use std::fmt::Write;

use super::budget::dissipation_budget;
use super::ledger::LedgerRow;

/// Invariant maxima, the dissipation budget and the end points of `X(t)`.
pub fn report_text(rows: &[LedgerRow]) -> String {
    let mut s = String::new();
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        return "empty ledger\n".into();
    };
    let max = |f: fn(&LedgerRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let _ = writeln!(s, "rows: {}  t: {} .. {}", rows.len(), first.t, last.t);
    let _ = writeln!(s, "\ninvariant maxima");
    for (name, v) in [
        ("frozen_in_resid", max(|r| r.residuals.frozen_in)),
        ("det_resid", max(|r| r.residuals.det)),
        ("grad_struct_resid", max(|r| r.residuals.grad_struct)),
        ("coupling_resid", max(|r| r.residuals.coupling)),
        ("div_u", max(|r| r.residuals.div_u)),
        ("div_h", max(|r| r.residuals.div_h)),
        ("trace_det_resid", max(|r| r.residuals.trace_det)),
    ] {
        let _ = writeln!(s, "  {name:<20} {v:.6e}");
    }
    let b = dissipation_budget(rows);
    let _ = writeln!(s, "\ndissipation budget (trapezoid over ledger rows)");
    for (name, v) in [
        ("int hatB2(u)", b.u_hat_b2),
        ("int low-regime H", b.h_low),
        ("int high-regime d1 H", b.h_high),
        ("int hatB1(H)^2 (lhs)", b.h_l2_b1_sq),
        ("sup hybrid01(H)", b.sup_h_hybrid),
        ("sup hatB1(A)", b.sup_a_hat_b1),
        ("rhs low term", b.rhs_low),
        ("rhs high term", b.rhs_high),
        ("quadrature error", b.quadrature_error),
    ] {
        let _ = writeln!(s, "  {name:<22} {v:.6e}");
    }
    match b.ratio() {
        Some(r) => {
            let _ = writeln!(s, "  {:<22} {r:.6e}", "lhs / rhs");
        }
        None => {
            let _ = writeln!(s, "  {:<22} n/a (rhs = 0)", "lhs / rhs");
        }
    }
    let _ = writeln!(s, "\nX(t)");
    let _ = writeln!(s, "  X(0) = {:.6e}", first.x_t);
    let _ = writeln!(s, "  X(T) = {:.6e}", last.x_t);
    if first.x_t > 0.0 {
        let _ = writeln!(s, "  X(T) / X(0) = {:.6}", last.x_t / first.x_t);
    }
    s
}
