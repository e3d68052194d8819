//! Spectral analysis of the linearized system
//! `∂ₜu − Δu − ∂₁v = 0`, `∂ₜv − ∂₁u = 0`.
//!
//! [`symbol`] returns the symbol in the sign convention `∂ ↔ −iξ`. The rest of
//! the crate uses `∂ ↔ +iξ` (see [`crate::spectral`]), under which the mode
//! `e^{iξ·x}` evolves by `symbol(−ξ)`; [`mode_matrix`] is that matrix, and
//! [`propagate_linear`] uses it. Eigenvalues depend on `ξ₁²` only and do not
//! see the difference.

use num_complex::Complex64;

use crate::spectral::{Grid, SpectralField, VectorField};

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Amplitudes below this are treated as underflow by [`fit_decay`].
pub const UNDERFLOW: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinearError {
    #[error("degenerate mode: xi = (0, 0)")]
    DegenerateMode,
    #[error("decay fit needs at least 4 usable samples, got {found}")]
    TooFewSamples { found: usize },
    #[error("times and amplitudes differ in length ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `2|ξ₁| ≥ |ξ|²`: both eigenvalues dissipate at the parabolic rate.
    Parabolic,
    /// `2|ξ₁| < |ξ|²`: `λ₋` only damps through `ξ₁`.
    Damped,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::Parabolic => "parabolic",
            Regime::Damped => "damped",
        }
    }
}

/// `A(ξ) = [[−|ξ|², −iξ₁], [−iξ₁, 0]]`.
pub fn symbol(xi1: f64, xi2: f64) -> Matrix2 {
    let a = xi1 * xi1 + xi2 * xi2;
    [
        [Complex64::new(-a, 0.0), Complex64::new(0.0, -xi1)],
        [Complex64::new(0.0, -xi1), ZERO],
    ]
}

/// Evolution matrix of the mode `e^{iξ·x}` under the crate convention,
/// `[[−a, iξ₁], [iξ₁, 0]]`, with `a = |ξ|²` passed separately so callers can
/// pair the true `|ξ|²` with a derivative frequency `ξ₁`.
pub fn mode_matrix(xi1: f64, a: f64) -> Matrix2 {
    [
        [Complex64::new(-a, 0.0), Complex64::new(0.0, xi1)],
        [Complex64::new(0.0, xi1), ZERO],
    ]
}

/// Roots of `λ² + aλ + ξ₁² = 0` ordered as `(λ₊, λ₋)`, `λ₊` taking the `+` of
/// `−½(a ± √(a² − 4ξ₁²))`. The real branch forms `λ₋ = ξ₁²/λ₊` to avoid
/// cancellation, so `λ₋` is exactly zero when `ξ₁ = 0`.
fn roots(xi1: f64, a: f64) -> (Complex64, Complex64) {
    let disc = a * a - 4.0 * xi1 * xi1;
    if disc >= 0.0 {
        let lp = -0.5 * (a + disc.sqrt());
        let lm = xi1 * xi1 / lp + 0.0;
        (Complex64::new(lp, 0.0), Complex64::new(lm, 0.0))
    } else {
        let w = 0.5 * (-disc).sqrt();
        (Complex64::new(-0.5 * a, -w), Complex64::new(-0.5 * a, w))
    }
}

/// `(λ₊, λ₋)` of the symbol at `ξ`.
pub fn eigenvalues(xi1: f64, xi2: f64) -> Result<(Complex64, Complex64), LinearError> {
    if xi1 == 0.0 && xi2 == 0.0 {
        return Err(LinearError::DegenerateMode);
    }
    Ok(roots(xi1, xi1 * xi1 + xi2 * xi2))
}

/// Regime of `ξ`; the boundary `2|ξ₁| = |ξ|²` counts as parabolic.
pub fn regime(xi1: f64, xi2: f64) -> Result<Regime, LinearError> {
    if xi1 == 0.0 && xi2 == 0.0 {
        return Err(LinearError::DegenerateMode);
    }
    Ok(if 2.0 * xi1.abs() >= xi1 * xi1 + xi2 * xi2 {
        Regime::Parabolic
    } else {
        Regime::Damped
    })
}

/// Eigenvector `(u, v)` of [`mode_matrix`] for the eigenvalue `lambda`,
/// scaled so its larger entry is 1.
pub fn eigenvector(xi1: f64, a: f64, lambda: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    // rows: (−a − λ)u + iξ₁v = 0 and iξ₁u − λv = 0
    let (u, v) = if lambda.norm() >= (lambda + a).norm() {
        (ONE, i * xi1 / lambda)
    } else {
        (i * xi1 / (lambda + a), ONE)
    };
    let s = u.norm().max(v.norm());
    (u / s, v / s)
}

/// Per-frequency summary of the dispersion relation.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub xi: (f64, f64),
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub regime: Regime,
    pub measured_rate: Option<Complex64>,
    pub fit_residual: f64,
}

impl ModeReport {
    pub fn new(xi1: f64, xi2: f64) -> Result<Self, LinearError> {
        let (lambda_plus, lambda_minus) = eigenvalues(xi1, xi2)?;
        Ok(Self {
            xi: (xi1, xi2),
            lambda_plus,
            lambda_minus,
            regime: regime(xi1, xi2)?,
            measured_rate: None,
            fit_residual: 0.0,
        })
    }
}

#[cfg(test)]
fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// `exp(t·M)` for `M = mode_matrix(ξ₁, a)`.
///
/// With `μ = −a/2` and `δ² = a²/4 − ξ₁²`, `exp(tM) = c₀I + c₁M` where
/// `c₁ = e^{μt} sinh(δt)/δ` and `c₀ = e^{μt}(cosh δt − μ sinh(δt)/δ)`. Close
/// to the double root `sinh(δt)/δ` is taken from its series; at `δ = 0` the
/// formula is the Jordan form `e^{μt}(I + t(M − μI))`.
pub fn propagator(xi1: f64, a: f64, t: f64) -> Matrix2 {
    let m = mode_matrix(xi1, a);
    let mu = -0.5 * a;
    let d2 = 0.25 * a * a - xi1 * xi1;
    let z = d2 * t * t; // (δt)², real on both branches
    let (ec, es) = if z.abs() < 1e-4 {
        // e^{μt}cosh(δt), e^{μt}sinh(δt)/δ by series in (δt)²
        let e = (mu * t).exp();
        let c = 1.0 + z / 2.0 + z * z / 24.0 + z * z * z / 720.0;
        let s = t * (1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0);
        (e * c, e * s)
    } else if d2 > 0.0 {
        let (lp, lm) = roots(xi1, a);
        let (ep, em) = ((lm.re * t).exp(), (lp.re * t).exp());
        let delta = d2.sqrt();
        (0.5 * (ep + em), 0.5 * (ep - em) / delta)
    } else {
        let e = (mu * t).exp();
        let w = (-d2).sqrt();
        (e * (w * t).cos(), e * (w * t).sin() / w)
    };
    let c0 = Complex64::new(ec - mu * es, 0.0);
    let c1 = Complex64::new(es, 0.0);
    [
        [c0 + c1 * m[0][0], c1 * m[0][1]],
        [c1 * m[1][0], c0 + c1 * m[1][1]],
    ]
}

/// Apply [`propagator`] to one mode's `(u, v)`.
pub fn propagate_mode(
    xi1: f64,
    a: f64,
    state: (Complex64, Complex64),
    t: f64,
) -> (Complex64, Complex64) {
    let p = propagator(xi1, a, t);
    (
        p[0][0] * state.0 + p[0][1] * state.1,
        p[1][0] * state.0 + p[1][1] * state.1,
    )
}

/// Exact solution of the linear system at time `t`.
///
/// Each vector component pairs `u_c` with `v_c` mode by mode. The mode uses
/// the derivative frequency `ξ₁` (zero on the Nyquist line) with the true
/// `|ξ|²`, matching the discrete operators of the solver. The mean is held
/// constant.
pub fn propagate_linear(u0: &VectorField, v0: &VectorField, t: f64) -> (VectorField, VectorField) {
    let grid = *u0.grid();
    debug_assert_eq!(&grid, v0.grid());
    let mut u = u0.clone();
    let mut v = v0.clone();
    for idx in 1..grid.len() {
        let (d1, _) = grid.derivative_xi(idx);
        let (a1, a2) = grid.xi(idx);
        let p = propagator(d1, a1 * a1 + a2 * a2, t);
        for (uc, vc, uo, vo) in [
            (&mut u.x, &mut v.x, &u0.x, &v0.x),
            (&mut u.y, &mut v.y, &u0.y, &v0.y),
        ] {
            let (a, b) = (uo.coeffs()[idx], vo.coeffs()[idx]);
            uc.coeffs_mut()[idx] = p[0][0] * a + p[0][1] * b;
            vc.coeffs_mut()[idx] = p[1][0] * a + p[1][1] * b;
        }
    }
    (u, v)
}

/// Scalar variant of [`propagate_linear`].
pub fn propagate_linear_scalar(
    u0: &SpectralField,
    v0: &SpectralField,
    t: f64,
) -> (SpectralField, SpectralField) {
    let z = SpectralField::zeros(*u0.grid());
    let (u, v) = propagate_linear(
        &VectorField {
            x: u0.clone(),
            y: z.clone(),
        },
        &VectorField {
            x: v0.clone(),
            y: z,
        },
        t,
    );
    (u.x, v.x)
}

/// Dispersion report for every nonzero mode of the grid (true frequencies).
pub fn dispersion_map(grid: &Grid) -> Vec<ModeReport> {
    (1..grid.len())
        .map(|idx| {
            let (a, b) = grid.xi(idx);
            ModeReport::new(a, b).expect("nonzero frequency")
        })
        .collect()
}

/// Fitted exponential rate of a complex time series.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub rate: Complex64,
    /// RMS of the residuals of the log-amplitude and phase fits combined.
    pub residual: f64,
    /// Samples used after underflow truncation.
    pub used: usize,
    pub truncated: bool,
}

fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - icpt - slope * a).powi(2))
        .sum();
    (slope, icpt, ss)
}

/// Least-squares fit of `c(t) ≈ C e^{λt}`: `Re λ` from `log|c|`, `Im λ` from
/// the unwrapped phase (accumulated from successive ratios `c_{n+1}/c_n`).
/// The series is cut at the first amplitude below [`UNDERFLOW`].
pub fn fit_decay(times: &[f64], values: &[Complex64]) -> Result<DecayFit, LinearError> {
    if times.len() != values.len() {
        return Err(LinearError::LengthMismatch {
            times: times.len(),
            values: values.len(),
        });
    }
    let used = values
        .iter()
        .position(|c| c.norm() < UNDERFLOW)
        .unwrap_or(values.len());
    if used < 4 {
        return Err(LinearError::TooFewSamples { found: used });
    }
    let t = &times[..used];
    let c = &values[..used];
    let logs: Vec<f64> = c.iter().map(|v| v.norm().ln()).collect();
    let mut phase = Vec::with_capacity(used);
    let mut acc = c[0].arg();
    phase.push(acc);
    for w in c.windows(2) {
        acc += (w[1] / w[0]).arg();
        phase.push(acc);
    }
    let (re, _, ss_re) = line_fit(t, &logs);
    let (im, _, ss_im) = line_fit(t, &phase);
    Ok(DecayFit {
        rate: Complex64::new(re, im),
        residual: ((ss_re + ss_im) / used as f64).sqrt(),
        used,
        truncated: used < values.len(),
    })
}
