//! Time series of norms and residuals along a run.

use std::io::{self, Write};

use super::invariants::{residuals, Residuals};
use crate::lp::{is_regime1, BlockTable, DyadicLayout};
use crate::solver::MHDState;
use crate::spectral::{Axis, VectorField};

/// Column names of the ledger CSV, in order.
pub const LEDGER_COLUMNS: [&str; 13] = [
    "t",
    "l2_u",
    "l2_h",
    "hatB0_u",
    "hybrid01_h",
    "hatB1_A",
    "frozen_in_resid",
    "det_resid",
    "grad_struct_resid",
    "coupling_resid",
    "div_u",
    "div_h",
    "X_t",
];

/// Norms of one state. The CSV carries a subset; the rest feeds budgets.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LedgerRow {
    pub t: f64,
    pub l2_u: f64,
    pub l2_h: f64,
    pub hat_b0_u: f64,
    pub hybrid01_h: f64,
    pub hat_b1_a: f64,
    pub residuals: Residuals,
    pub x_t: f64,
    pub hat_b2_u: f64,
    pub hat_b1_h: f64,
    /// `Σ_{k+1≥2q} 2^{2q} ‖Δ_qΔ_k¹H‖`
    pub h_dissipation_low: f64,
    /// `Σ_{k+1<2q} ‖Δ_qΔ_k¹∂₁H‖`
    pub h_dissipation_high: f64,
}

impl LedgerRow {
    /// Everything except `x_t`, which depends on the history.
    pub fn measure(layout: &DyadicLayout, s: &MHDState) -> Self {
        let tu = layout.table(&[&s.u.x, &s.u.y]);
        let th = layout.table(&[&s.h.x, &s.h.y]);
        let pa = s.a_pert();
        let ta = layout.table(&[&pa[0][0], &pa[0][1], &pa[1][0], &pa[1][1]]);
        let dh = VectorField {
            x: s.h.x.partial(Axis::X1),
            y: s.h.y.partial(Axis::X1),
        };
        let tdh = layout.table(&[&dh.x, &dh.y]);
        Self {
            t: s.t,
            l2_u: s.u.l2_norm(),
            l2_h: s.h.l2_norm(),
            hat_b0_u: tu.hat(0.0),
            hybrid01_h: th.hybrid(0.0, 1.0),
            hat_b1_a: ta.hat(1.0),
            residuals: residuals(s),
            x_t: 0.0,
            hat_b2_u: tu.hat(2.0),
            hat_b1_h: th.hat(1.0),
            h_dissipation_low: regime_sum(&th, true, |q| 4f64.powi(q)),
            h_dissipation_high: regime_sum(&tdh, false, |_| 1.0),
        }
    }

    /// Values in [`LEDGER_COLUMNS`] order.
    pub fn csv_values(&self) -> [f64; 13] {
        let r = &self.residuals;
        [
            self.t,
            self.l2_u,
            self.l2_h,
            self.hat_b0_u,
            self.hybrid01_h,
            self.hat_b1_a,
            r.frozen_in,
            r.det,
            r.grad_struct,
            r.coupling,
            r.div_u,
            r.div_h,
            self.x_t,
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.csv_values().iter().all(|v| v.is_finite())
            && self.hat_b2_u.is_finite()
            && self.hat_b1_h.is_finite()
    }
}

fn regime_sum(t: &BlockTable, low: bool, weight: impl Fn(i32) -> f64) -> f64 {
    t.weighted_sum(|q, k| {
        if is_regime1(q, k) == low {
            weight(q)
        } else {
            0.0
        }
    })
}

/// Running pieces of `X(t)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct XAccumulator {
    sup_a: f64,
    sup_u: f64,
    sup_h: f64,
    int_u2: f64,
    int_h1_sq: f64,
}

impl XAccumulator {
    fn value(&self) -> f64 {
        self.sup_a + self.sup_u + self.sup_h + self.int_u2 + self.int_h1_sq.sqrt()
    }

    fn advance(&mut self, prev: Option<&LedgerRow>, row: &LedgerRow) {
        self.sup_a = self.sup_a.max(row.hat_b1_a);
        self.sup_u = self.sup_u.max(row.hat_b0_u);
        self.sup_h = self.sup_h.max(row.hybrid01_h);
        if let Some(p) = prev {
            let dt = row.t - p.t;
            self.int_u2 += 0.5 * dt * (p.hat_b2_u + row.hat_b2_u);
            self.int_h1_sq += 0.5 * dt * (p.hat_b1_h.powi(2) + row.hat_b1_h.powi(2));
        }
    }
}

/// `X(t) = ‖𝒜‖_{L^∞_t(B̂¹)} + ‖u‖_{L^∞_t(B̂⁰)} + ‖H‖_{L^∞_t(B̃^{0,1})} +
/// ‖u‖_{L¹_t(B̂²)} + ‖H‖_{L²_t(B̂¹)}` at every row: running maxima and
/// trapezoid quadrature. Non-decreasing by construction.
pub fn x_of_t(rows: &[LedgerRow]) -> Vec<f64> {
    let mut acc = XAccumulator::default();
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        acc.advance(i.checked_sub(1).map(|j| &rows[j]), r);
        out.push(acc.value());
    }
    out
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LedgerError {
    #[error("ledger time {t} does not follow {prev}")]
    NonIncreasingTime { prev: f64, t: f64 },
    #[error("non-finite ledger value at t = {t}")]
    NonFinite { t: f64 },
}

/// Rows in strictly increasing time, with `X(t)` maintained as rows arrive.
#[derive(Debug, Clone)]
pub struct NormLedger {
    layout: DyadicLayout,
    rows: Vec<LedgerRow>,
    acc: XAccumulator,
}

impl NormLedger {
    pub fn new(layout: DyadicLayout) -> Self {
        Self {
            layout,
            rows: Vec::new(),
            acc: XAccumulator::default(),
        }
    }

    pub fn layout(&self) -> &DyadicLayout {
        &self.layout
    }

    pub fn rows(&self) -> &[LedgerRow] {
        &self.rows
    }

    /// Measures `s` and appends its row.
    pub fn record(&mut self, s: &MHDState) -> Result<&LedgerRow, LedgerError> {
        let row = LedgerRow::measure(&self.layout, s);
        self.push(row)
    }

    /// Appends a measured row, filling in `x_t`.
    pub fn push(&mut self, mut row: LedgerRow) -> Result<&LedgerRow, LedgerError> {
        if let Some(p) = self.rows.last() {
            if !(row.t > p.t) {
                return Err(LedgerError::NonIncreasingTime {
                    prev: p.t,
                    t: row.t,
                });
            }
        }
        let mut acc = self.acc;
        acc.advance(self.rows.last(), &row);
        row.x_t = acc.value();
        if !row.is_finite() {
            return Err(LedgerError::NonFinite { t: row.t });
        }
        self.acc = acc;
        self.rows.push(row);
        Ok(self.rows.last().expect("just pushed"))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        write_ledger_csv(w, &self.rows)
    }
}

pub fn write_ledger_csv<W: Write>(w: W, rows: &[LedgerRow]) -> io::Result<()> {
    write_rows(w, &LEDGER_COLUMNS, rows.iter().map(LedgerRow::csv_values))
}

/// Columns of the full ledger: the CSV ones followed by the quantities that
/// budgets and reports need.
pub const FULL_COLUMNS: [&str; 18] = [
    "t",
    "l2_u",
    "l2_h",
    "hatB0_u",
    "hybrid01_h",
    "hatB1_A",
    "frozen_in_resid",
    "det_resid",
    "grad_struct_resid",
    "coupling_resid",
    "div_u",
    "div_h",
    "X_t",
    "trace_det_resid",
    "hatB2_u",
    "hatB1_h",
    "h_dissipation_low",
    "h_dissipation_high",
];

impl LedgerRow {
    fn full_values(&self) -> [f64; 18] {
        let mut out = [0.0; 18];
        out[..13].copy_from_slice(&self.csv_values());
        out[13..].copy_from_slice(&[
            self.residuals.trace_det,
            self.hat_b2_u,
            self.hat_b1_h,
            self.h_dissipation_low,
            self.h_dissipation_high,
        ]);
        out
    }

    fn from_full(v: &[f64; 18]) -> Self {
        Self {
            t: v[0],
            l2_u: v[1],
            l2_h: v[2],
            hat_b0_u: v[3],
            hybrid01_h: v[4],
            hat_b1_a: v[5],
            residuals: Residuals {
                frozen_in: v[6],
                det: v[7],
                grad_struct: v[8],
                coupling: v[9],
                div_u: v[10],
                div_h: v[11],
                trace_det: v[13],
            },
            x_t: v[12],
            hat_b2_u: v[14],
            hat_b1_h: v[15],
            h_dissipation_low: v[16],
            h_dissipation_high: v[17],
        }
    }
}

fn write_rows<W: Write, const N: usize>(
    mut w: W,
    header: &[&str; N],
    rows: impl Iterator<Item = [f64; N]>,
) -> io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for vals in rows {
        let line: Vec<String> = vals.iter().map(|v| format!("{v:.17e}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

fn read_rows<const N: usize>(text: &str, header: &[&str; N]) -> Result<Vec<[f64; N]>, String> {
    let mut lines = text.lines();
    let first = lines.next().ok_or("empty ledger")?;
    if first.trim() != header.join(",") {
        return Err(format!("unexpected ledger header {first:?}"));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Result<Vec<f64>, _> = line.split(',').map(|v| v.trim().parse::<f64>()).collect();
        let vals = vals.map_err(|e| format!("ledger line {}: {e}", n + 2))?;
        let arr: [f64; N] = vals
            .try_into()
            .map_err(|v: Vec<f64>| format!("ledger line {}: {} columns", n + 2, v.len()))?;
        rows.push(arr);
    }
    Ok(rows)
}

/// Every field of every row, in [`FULL_COLUMNS`] order.
pub fn write_full_csv<W: Write>(w: W, rows: &[LedgerRow]) -> io::Result<()> {
    write_rows(w, &FULL_COLUMNS, rows.iter().map(LedgerRow::full_values))
}

pub fn read_full_csv(text: &str) -> Result<Vec<LedgerRow>, String> {
    Ok(read_rows(text, &FULL_COLUMNS)?
        .iter()
        .map(LedgerRow::from_full)
        .collect())
}

/// Parsed ledger CSV: one value array per row in [`LEDGER_COLUMNS`] order.
pub fn read_ledger_csv(text: &str) -> Result<Vec<[f64; 13]>, String> {
    read_rows(text, &LEDGER_COLUMNS)
}
