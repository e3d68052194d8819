//! Pointwise structural residuals of a state.

use ndarray::Array2;

use crate::solver::MHDState;
use crate::spectral::Axis;

/// Maxima over the grid of each structural defect.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residuals {
    /// `|A(h₀ + H) − h₀|`
    pub frozen_in: f64,
    /// `|det A − 1|`
    pub det: f64,
    /// `|∂₂A_{i1} − ∂₁A_{i2}|` over both rows
    pub grad_struct: f64,
    /// `max(|H₁ − 𝒜₂₂|, |H₂ + 𝒜₂₁|)`
    pub coupling: f64,
    pub div_u: f64,
    pub div_h: f64,
    /// `|tr 𝒜 + det 𝒜|`
    pub trace_det: f64,
}

impl Residuals {
    /// Largest of the residuals stored in the ledger.
    pub fn max_structural(&self) -> f64 {
        [
            self.frozen_in,
            self.det,
            self.grad_struct,
            self.coupling,
            self.div_u,
            self.div_h,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub fn residuals(s: &MHDState) -> Residuals {
    let a: Vec<Array2<f64>> = s.a.iter().flatten().map(|f| f.to_samples()).collect();
    let (a11, a12, a21, a22) = (&a[0], &a[1], &a[2], &a[3]);
    let h1 = s.h.x.to_samples();
    let h2 = s.h.y.to_samples();
    let b1 = h1.mapv(|v| v + 1.0);
    let f1 = a11 * &b1 + a12 * &h2 - 1.0;
    let f2 = a21 * &b1 + a22 * &h2;
    let frozen_in = f1
        .iter()
        .zip(f2.iter())
        .fold(0.0_f64, |m, (x, y)| m.max(x.hypot(*y)));
    let det = a11 * a22 - a12 * a21;
    let p11 = a11 - 1.0;
    let p22 = a22 - 1.0;
    let pdet = &p11 * &p22 - a12 * a21;
    let trace_det = max_abs(&(&p11 + &p22 + &pdet));
    let grad_struct = (0..2)
        .map(|i| (&s.a[i][0].partial(Axis::X2) - &s.a[i][1].partial(Axis::X1)).max_abs())
        .fold(0.0, f64::max);
    let coupling = max_abs(&(&h1 - &p22)).max(max_abs(&(&h2 + a21)));
    Residuals {
        frozen_in,
        det: max_abs(&(det - 1.0)),
        grad_struct,
        coupling,
        div_u: s.u.divergence().max_abs(),
        div_h: s.h.divergence().max_abs(),
        trace_det,
    }
}
