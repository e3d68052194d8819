use std::f64::consts::PI;

use super::{Axis, SpectralError};

/// Doubly periodic grid `[0, length1) x [0, length2)` with `n1 x n2` points.
///
/// Coefficients and samples are stored row-major with shape `(n1, n2)`: the
/// flat index of `(i1, i2)` is `i1 * n2 + i2`, where `i1` runs along `x1`.
/// FFT index `i` maps to the centered mode index `m = i` for `i < n/2` and
/// `m = i - n` otherwise, so the Nyquist mode is `m = -n/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n1: usize,
    n2: usize,
    length1: f64,
    length2: f64,
}

/// Default period `2π·16`, which resolves several dyadic shells below `|ξ| = 1`.
pub const DEFAULT_LENGTH: f64 = 2.0 * PI * 16.0;

impl Grid {
    pub fn new(n1: usize, n2: usize, length1: f64, length2: f64) -> Result<Self, SpectralError> {
        for (axis, n) in [(Axis::X1, n1), (Axis::X2, n2)] {
            if n < 2 || n % 2 != 0 {
                return Err(SpectralError::InvalidGrid(format!(
                    "mode count along {axis} must be a positive even integer, got {n}"
                )));
            }
        }
        for (axis, l) in [(Axis::X1, length1), (Axis::X2, length2)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(SpectralError::InvalidGrid(format!(
                    "period along {axis} must be positive and finite, got {l}"
                )));
            }
        }
        Ok(Self {
            n1,
            n2,
            length1,
            length2,
        })
    }

    /// Square `n x n` grid with equal periods.
    pub fn square(n: usize, length: f64) -> Result<Self, SpectralError> {
        Self::new(n, n, length, length)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn length1(&self) -> f64 {
        self.length1
    }

    pub fn length2(&self) -> f64 {
        self.length2
    }

    /// Number of modes, `n1 * n2`.
    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    /// Same periods, `factor` times as many points per axis.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            n1: self.n1 * factor,
            n2: self.n2 * factor,
            ..*self
        }
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.n2 + i2
    }

    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.n2, idx % self.n2)
    }

    #[inline]
    fn centered(i: usize, n: usize) -> i64 {
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Centered integer mode indices `(m1, m2)` of the flat index.
    #[inline]
    pub fn mode(&self, idx: usize) -> (i64, i64) {
        let (i1, i2) = self.split(idx);
        (Self::centered(i1, self.n1), Self::centered(i2, self.n2))
    }

    /// Flat index of the centered mode `(m1, m2)`, if representable.
    pub fn index_of_mode(&self, m1: i64, m2: i64) -> Option<usize> {
        let h1 = (self.n1 / 2) as i64;
        let h2 = (self.n2 / 2) as i64;
        if m1 < -h1 || m1 >= h1 || m2 < -h2 || m2 >= h2 {
            return None;
        }
        let i1 = m1.rem_euclid(self.n1 as i64) as usize;
        let i2 = m2.rem_euclid(self.n2 as i64) as usize;
        Some(self.index(i1, i2))
    }

    /// Flat index of the mode `-ξ`. Nyquist indices map to themselves.
    #[inline]
    pub fn negate(&self, idx: usize) -> usize {
        let (i1, i2) = self.split(idx);
        self.index((self.n1 - i1) % self.n1, (self.n2 - i2) % self.n2)
    }

    #[inline]
    pub fn is_nyquist1(&self, idx: usize) -> bool {
        self.split(idx).0 == self.n1 / 2
    }

    #[inline]
    pub fn is_nyquist2(&self, idx: usize) -> bool {
        self.split(idx).1 == self.n2 / 2
    }

    pub fn is_nyquist(&self, idx: usize) -> bool {
        self.is_nyquist1(idx) || self.is_nyquist2(idx)
    }

    /// Frequency step `2π/L` along each axis.
    pub fn spacing(&self) -> (f64, f64) {
        (2.0 * PI / self.length1, 2.0 * PI / self.length2)
    }

    /// Frequency `ξ = 2π (m1/L1, m2/L2)` of the flat index.
    #[inline]
    pub fn xi(&self, idx: usize) -> (f64, f64) {
        let (m1, m2) = self.mode(idx);
        let (d1, d2) = self.spacing();
        (m1 as f64 * d1, m2 as f64 * d2)
    }

    #[inline]
    pub fn xi_norm(&self, idx: usize) -> f64 {
        let (a, b) = self.xi(idx);
        a.hypot(b)
    }

    /// Frequency used by odd (first-derivative type) operators: the Nyquist
    /// component along each axis is replaced by zero so real fields stay real.
    #[inline]
    pub fn derivative_xi(&self, idx: usize) -> (f64, f64) {
        let (a, b) = self.xi(idx);
        let a = if self.is_nyquist1(idx) { 0.0 } else { a };
        let b = if self.is_nyquist2(idx) { 0.0 } else { b };
        (a, b)
    }

    /// Dealiasing band: `|m1| <= n1/3` and `|m2| <= n2/3`.
    #[inline]
    pub fn in_dealias_band(&self, idx: usize) -> bool {
        let (m1, m2) = self.mode(idx);
        3 * m1.unsigned_abs() as usize <= self.n1 && 3 * m2.unsigned_abs() as usize <= self.n2
    }

    /// Largest `|ξ|` inside the dealiasing band.
    pub fn dealiased_kmax(&self) -> f64 {
        let (d1, d2) = self.spacing();
        let k1 = (self.n1 / 3) as f64 * d1;
        let k2 = (self.n2 / 3) as f64 * d2;
        k1.hypot(k2)
    }

    /// Largest `|ξ|` over all modes.
    pub fn kmax(&self) -> f64 {
        let (d1, d2) = self.spacing();
        ((self.n1 / 2) as f64 * d1).hypot((self.n2 / 2) as f64 * d2)
    }

    /// Physical coordinate of grid point `(i1, i2)`.
    pub fn point(&self, i1: usize, i2: usize) -> (f64, f64) {
        (
            i1 as f64 * self.length1 / self.n1 as f64,
            i2 as f64 * self.length2 / self.n2 as f64,
        )
    }

    pub fn check_same(&self, other: &Grid) -> Result<(), SpectralError> {
        if self == other {
            Ok(())
        } else {
            Err(SpectralError::GridMismatch {
                left: *self,
                right: *other,
            })
        }
    }
}
