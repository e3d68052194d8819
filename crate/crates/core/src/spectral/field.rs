use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use ndarray::Array2;
use num_complex::Complex64;

use super::{fft, Axis, Grid, SpectralError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Fourier coefficients of a scalar field on a periodic grid.
///
/// Normalization: the forward transform divides by `n1·n2`, so `c(0,0)` is the
/// grid mean and Parseval reads `mean |f|² = Σ |c(ξ)|²`. All `L²` norms in this
/// crate are taken in that mean-square sense.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            coeffs: vec![ZERO; grid.len()],
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.len() {
            return Err(SpectralError::CoefficientCount {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    /// Constant field.
    pub fn constant(grid: Grid, value: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex64::new(value, 0.0);
        f
    }

    /// `amplitude · cos(ξ·x + phase)` for the centered mode `(m1, m2)`.
    pub fn cosine_mode(grid: Grid, m1: i64, m2: i64, amplitude: f64, phase: f64) -> Self {
        let mut f = Self::zeros(grid);
        let idx = grid
            .index_of_mode(m1, m2)
            .expect("mode outside the grid's centered range");
        let neg = grid.negate(idx);
        let c = Complex64::from_polar(0.5 * amplitude, phase);
        if neg == idx {
            f.coeffs[idx] += Complex64::new(amplitude * phase.cos(), 0.0);
        } else {
            f.coeffs[idx] += c;
            f.coeffs[neg] += c.conj();
        }
        f
    }

    /// Samples `f(x1, x2)` at the grid points and transforms them.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let samples = Array2::from_shape_fn(grid.shape(), |(i1, i2)| {
            let (x1, x2) = grid.point(i1, i2);
            f(x1, x2)
        });
        transform_forward(grid, &samples).expect("shape built from grid")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn without_mean(&self) -> Self {
        let mut f = self.clone();
        f.coeffs[0] = ZERO;
        f
    }

    /// Real grid values (imaginary parts, if any, are dropped).
    pub fn to_samples(&self) -> Array2<f64> {
        self.to_complex_samples().mapv(|c| c.re)
    }

    pub fn to_complex_samples(&self) -> Array2<Complex64> {
        let mut buf = self.coeffs.clone();
        fft::inverse(&mut buf, self.grid.n1(), self.grid.n2());
        Array2::from_shape_vec(self.grid.shape(), buf).expect("buffer sized from grid")
    }

    /// Mean-square `L²` norm, `(Σ|c|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(f | g) = Re Σ c_f conj(c_g)`, the grid-mean inner product.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    /// Pointwise maximum of `|f|` over the grid.
    pub fn max_abs(&self) -> f64 {
        self.to_complex_samples()
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|c(−ξ) − conj c(ξ)|` relative to the largest coefficient.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        (0..self.grid.len())
            .map(|idx| (self.coeffs[self.grid.negate(idx)] - self.coeffs[idx].conj()).norm())
            .fold(0.0, f64::max)
            / scale
    }

    /// Every coefficient multiplied by `symbol(idx, ξ)`; no checks.
    pub(crate) fn map_modes(&self, symbol: impl Fn(usize, (f64, f64)) -> Complex64) -> Self {
        let grid = self.grid;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                if c == ZERO {
                    ZERO
                } else {
                    symbol(idx, grid.xi(idx)) * c
                }
            })
            .collect();
        Self { grid, coeffs }
    }

    /// Fourier multiplier `c'(ξ) = m(ξ)·c(ξ)`.
    ///
    /// At `ξ = 0` the output is zero whenever `m(0)` is not finite (homogeneous
    /// convention); a non-finite value at any other frequency is an error.
    pub fn apply_multiplier(
        &self,
        symbol: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self, SpectralError> {
        let grid = self.grid;
        let mut coeffs = Vec::with_capacity(grid.len());
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let (xi1, xi2) = grid.xi(idx);
            let m = symbol(xi1, xi2);
            let finite = m.re.is_finite() && m.im.is_finite();
            if idx == 0 {
                coeffs.push(if finite { m * c } else { ZERO });
            } else if finite {
                coeffs.push(m * c);
            } else {
                return Err(SpectralError::NonFiniteSymbol { xi1, xi2 });
            }
        }
        Ok(Self { grid, coeffs })
    }

    /// Spectral derivative along `axis` (multiplier `iξ_axis`, Nyquist dropped).
    pub fn partial(&self, axis: Axis) -> Self {
        let grid = self.grid;
        self.map_modes(|idx, _| {
            let (a, b) = grid.derivative_xi(idx);
            let k = match axis {
                Axis::X1 => a,
                Axis::X2 => b,
            };
            Complex64::new(0.0, k)
        })
    }

    pub fn laplacian(&self) -> Self {
        self.map_modes(|_, (a, b)| Complex64::new(-(a * a + b * b), 0.0))
    }

    /// Inverse Laplacian with zero mean.
    pub fn inverse_laplacian(&self) -> Self {
        self.map_modes(|idx, (a, b)| {
            if idx == 0 {
                ZERO
            } else {
                Complex64::new(-1.0 / (a * a + b * b), 0.0)
            }
        })
    }

    /// `Λ^s`, symbol `|ξ|^s`; the mean is dropped unless `s = 0`.
    pub fn lambda_pow(&self, s: f64) -> Self {
        self.map_modes(|idx, (a, b)| {
            if idx == 0 {
                if s == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    ZERO
                }
            } else {
                Complex64::new(a.hypot(b).powf(s), 0.0)
            }
        })
    }

    /// Riesz transform `ℛ₁`, symbol `iξ₁/|ξ|`.
    pub fn riesz1(&self) -> Self {
        let grid = self.grid;
        self.map_modes(|idx, (a, b)| {
            if idx == 0 {
                ZERO
            } else {
                let (d1, _) = grid.derivative_xi(idx);
                Complex64::new(0.0, d1 / a.hypot(b))
            }
        })
    }

    /// Two-thirds rule: zero every mode with `|m1| > n1/3` or `|m2| > n2/3`.
    pub fn dealias(&self) -> Self {
        let grid = self.grid;
        self.map_modes(|idx, _| {
            if grid.in_dealias_band(idx) {
                Complex64::new(1.0, 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn dealias_in_place(&mut self) {
        let grid = self.grid;
        for (idx, c) in self.coeffs.iter_mut().enumerate() {
            if !grid.in_dealias_band(idx) {
                *c = ZERO;
            }
        }
    }

    /// Zero-padded copy on a finer grid with the same periods. A Nyquist
    /// coefficient is split evenly between `±n/2` so real fields stay real.
    pub fn padded(&self, target: Grid) -> Result<Self, SpectralError> {
        if target.length1() != self.grid.length1()
            || target.length2() != self.grid.length2()
            || target.n1() < self.grid.n1()
            || target.n2() < self.grid.n2()
        {
            return Err(SpectralError::GridMismatch {
                left: self.grid,
                right: target,
            });
        }
        let g = self.grid;
        let mut out = Self::zeros(target);
        let grow1 = target.n1() > g.n1();
        let grow2 = target.n2() > g.n2();
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let (m1, m2) = g.mode(idx);
            let m1s: &[i64] = if grow1 && g.is_nyquist1(idx) {
                &[m1, -m1]
            } else {
                &[m1]
            };
            let m2s: &[i64] = if grow2 && g.is_nyquist2(idx) {
                &[m2, -m2]
            } else {
                &[m2]
            };
            let share = c / (m1s.len() * m2s.len()) as f64;
            for &a in m1s {
                for &b in m2s {
                    let t = target
                        .index_of_mode(a, b)
                        .expect("padded grid contains mode");
                    out.coeffs[t] += share;
                }
            }
        }
        Ok(out)
    }

    /// Restriction to a coarser grid with the same periods (modes outside are dropped).
    pub fn truncated(&self, target: Grid) -> Result<Self, SpectralError> {
        if target.length1() != self.grid.length1() || target.length2() != self.grid.length2() {
            return Err(SpectralError::GridMismatch {
                left: self.grid,
                right: target,
            });
        }
        // `+n/2` of the target folds onto its Nyquist index `-n/2`, undoing the
        // split performed by `padded`.
        let fold = |m: i64, n: usize| if m == (n / 2) as i64 { -m } else { m };
        let mut out = Self::zeros(target);
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let (m1, m2) = self.grid.mode(idx);
            let (m1, m2) = (fold(m1, target.n1()), fold(m2, target.n2()));
            if let Some(t) = target.index_of_mode(m1, m2) {
                out.coeffs[t] += c;
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self += factor · other`.
    pub fn axpy(&mut self, factor: f64, other: &SpectralField) {
        debug_assert_eq!(self.grid, other.grid);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * factor;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Transform real grid samples of shape `(n1, n2)` into coefficients.
pub fn transform_forward(
    grid: Grid,
    samples: &Array2<f64>,
) -> Result<SpectralField, SpectralError> {
    let (r, c) = samples.dim();
    if r != grid.n1() {
        return Err(SpectralError::DimensionMismatch {
            axis: Axis::X1,
            expected: grid.n1(),
            found: r,
        });
    }
    if c != grid.n2() {
        return Err(SpectralError::DimensionMismatch {
            axis: Axis::X2,
            expected: grid.n2(),
            found: c,
        });
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft::forward(&mut buf, grid.n1(), grid.n2());
    Ok(SpectralField { grid, coeffs: buf })
}

/// Grid values of the field; inverse of [`transform_forward`].
pub fn transform_inverse(field: &SpectralField) -> Array2<f64> {
    field.to_samples()
}

pub(crate) fn from_physical(grid: Grid, samples: &Array2<f64>) -> SpectralField {
    transform_forward(grid, samples).expect("physical array built on the same grid")
}

impl Add<&SpectralField> for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        debug_assert_eq!(self.grid, rhs.grid);
        SpectralField {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&SpectralField> for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        debug_assert_eq!(self.grid, rhs.grid);
        SpectralField {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scaled(rhs)
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        self.axpy(1.0, rhs);
    }
}

/// Two-component field on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub x: SpectralField,
    pub y: SpectralField,
}

impl VectorField {
    pub fn new(x: SpectralField, y: SpectralField) -> Result<Self, SpectralError> {
        x.grid().check_same(y.grid())?;
        Ok(Self { x, y })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            x: SpectralField::zeros(grid),
            y: SpectralField::zeros(grid),
        }
    }

    /// Divergence-free field `∇⊥ψ = (∂₂ψ, −∂₁ψ)` of a stream function.
    pub fn curl_of_stream(psi: &SpectralField) -> Self {
        Self {
            x: psi.partial(Axis::X2),
            y: -&psi.partial(Axis::X1),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.x.grid()
    }

    pub fn components(&self) -> [&SpectralField; 2] {
        [&self.x, &self.y]
    }

    pub fn divergence(&self) -> SpectralField {
        &self.x.partial(Axis::X1) + &self.y.partial(Axis::X2)
    }

    /// `curl v = ∂₂v₁ − ∂₁v₂`.
    pub fn curl(&self) -> SpectralField {
        &self.x.partial(Axis::X2) - &self.y.partial(Axis::X1)
    }

    /// Leray projection `I − ξξᵀ/|ξ|²` per mode, using the derivative
    /// frequencies so the result is divergence-free to rounding. The mean mode
    /// (and any mode whose derivative frequency vanishes) is left unchanged.
    pub fn leray_project(&self) -> Self {
        let grid = *self.grid();
        let mut x = self.x.clone();
        let mut y = self.y.clone();
        for idx in 0..grid.len() {
            let (a, b) = grid.derivative_xi(idx);
            let k2 = a * a + b * b;
            if k2 == 0.0 {
                continue;
            }
            let vx = self.x.coeffs[idx];
            let vy = self.y.coeffs[idx];
            let dot = (vx * a + vy * b) / k2;
            x.coeffs[idx] = vx - dot * a;
            y.coeffs[idx] = vy - dot * b;
        }
        Self { x, y }
    }

    pub fn l2_norm(&self) -> f64 {
        (self.x.l2_norm().powi(2) + self.y.l2_norm().powi(2)).sqrt()
    }

    pub fn inner(&self, other: &VectorField) -> f64 {
        self.x.inner(&other.x) + self.y.inner(&other.y)
    }

    pub fn dealias(&self) -> Self {
        Self {
            x: self.x.dealias(),
            y: self.y.dealias(),
        }
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        Self {
            x: f(&self.x),
            y: f(&self.y),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|c| c.scaled(factor))
    }

    pub fn axpy(&mut self, factor: f64, other: &VectorField) {
        self.x.axpy(factor, &other.x);
        self.y.axpy(factor, &other.y);
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add<&VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }
}

impl Sub<&VectorField> for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField {
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
        }
    }
}
