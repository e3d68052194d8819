use std::io::{self, Write};
use std::ops::RangeInclusive;

use super::bump::{shell_weights, ShellWeights};
use super::LpError;
use crate::spectral::{Grid, SpectralField};

/// Relative size of the mean, against the field's `L²` norm, above which a
/// homogeneous norm refuses the field.
pub const MEAN_TOLERANCE: f64 = 1e-10;

/// `true` in the low-frequency regime `k + 1 ≥ 2q` (where `2|ξ₁| ≳ |ξ|²`).
#[inline]
pub fn is_regime1(q: i32, k: i32) -> bool {
    k + 1 >= 2 * q
}

/// Hybrid weight of block `(q, k)`: `2^{qs}` in regime 1, `2^{(2q−k)t}` otherwise.
#[inline]
pub fn hybrid_weight(q: i32, k: i32, s: f64, t: f64) -> f64 {
    if is_regime1(q, k) {
        2f64.powf(q as f64 * s)
    } else {
        2f64.powf((2 * q - k) as f64 * t)
    }
}

/// Isotropic shells `q` and `x₁`-shells `k` realized on a grid, with the
/// per-mode weights `ψ(2^{-q}ξ)` and `ψ₁(2^{-k}ξ₁)`.
///
/// Modes with `ξ₁ = 0` (other than the mean) carry no `x₁` weight: the
/// homogeneous one-dimensional decomposition does not reach them. They are
/// reported separately as the axis bucket and are absent from the hat and
/// hybrid sums.
#[derive(Debug, Clone)]
pub struct DyadicLayout {
    grid: Grid,
    iso: Vec<ShellWeights>,
    x1: Vec<ShellWeights>,
    q_range: (i32, i32),
    k_range: (i32, i32),
    active: Vec<bool>,
}

fn span(weights: &[ShellWeights]) -> (i32, i32) {
    let mut lo = i32::MAX;
    let mut hi = i32::MIN;
    for w in weights {
        for &(q, _) in w.as_slice() {
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    if lo > hi {
        (0, -1)
    } else {
        (lo, hi)
    }
}

impl DyadicLayout {
    pub fn new(grid: Grid) -> Self {
        let mut iso = Vec::with_capacity(grid.len());
        let mut x1 = Vec::with_capacity(grid.len());
        for idx in 0..grid.len() {
            let (a, _) = grid.xi(idx);
            iso.push(shell_weights(grid.xi_norm(idx)));
            x1.push(shell_weights(a.abs()));
        }
        let q_range = span(&iso);
        let k_range = span(&x1);
        let nk = (k_range.1 - k_range.0 + 1).max(0) as usize;
        let nq = (q_range.1 - q_range.0 + 1).max(0) as usize;
        let mut active = vec![false; nq * nk];
        for (wq, wk) in iso.iter().zip(&x1) {
            for &(q, _) in wq.as_slice() {
                for &(k, _) in wk.as_slice() {
                    active[(q - q_range.0) as usize * nk + (k - k_range.0) as usize] = true;
                }
            }
        }
        Self {
            grid,
            iso,
            x1,
            q_range,
            k_range,
            active,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn q_range(&self) -> RangeInclusive<i32> {
        self.q_range.0..=self.q_range.1
    }

    pub fn k_range(&self) -> RangeInclusive<i32> {
        self.k_range.0..=self.k_range.1
    }

    pub fn iso_weights(&self, idx: usize) -> &ShellWeights {
        &self.iso[idx]
    }

    pub fn x1_weights(&self, idx: usize) -> &ShellWeights {
        &self.x1[idx]
    }

    /// `true` when block `(q, k)` has a nonzero weight at some grid mode.
    pub fn is_active(&self, q: i32, k: i32) -> bool {
        if !self.q_range().contains(&q) || !self.k_range().contains(&k) {
            return false;
        }
        let nk = (self.k_range.1 - self.k_range.0 + 1) as usize;
        self.active[(q - self.q_range.0) as usize * nk + (k - self.k_range.0) as usize]
    }

    fn filtered(&self, f: &SpectralField, weight: impl Fn(usize) -> f64) -> SpectralField {
        debug_assert_eq!(f.grid(), &self.grid);
        let coeffs = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, &c)| c * weight(i))
            .collect();
        SpectralField::from_coeffs(self.grid, coeffs).expect("same grid")
    }

    /// `Δ_q f`; zero for a shell outside the active range.
    pub fn block(&self, f: &SpectralField, q: i32) -> SpectralField {
        self.filtered(f, |i| self.iso[i].weight(q))
    }

    /// `Δ_k¹ f`.
    pub fn block_x1(&self, f: &SpectralField, k: i32) -> SpectralField {
        self.filtered(f, |i| self.x1[i].weight(k))
    }

    /// `Δ_q Δ_k¹ f`.
    pub fn block_qk(&self, f: &SpectralField, q: i32, k: i32) -> SpectralField {
        self.filtered(f, |i| self.iso[i].weight(q) * self.x1[i].weight(k))
    }

    /// `S_q f = Σ_{p ≤ q−1} Δ_p f` (the mean is not included).
    pub fn lowpass(&self, f: &SpectralField, q: i32) -> SpectralField {
        self.filtered(f, |i| {
            self.iso[i]
                .as_slice()
                .iter()
                .filter(|(p, _)| *p < q)
                .map(|(_, w)| w)
                .sum()
        })
    }

    /// Modes with `ξ₁ = 0` other than the mean.
    pub fn axis_part(&self, f: &SpectralField) -> SpectralField {
        let grid = self.grid;
        self.filtered(f, |i| {
            if i != 0 && grid.mode(i).0 == 0 {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Block norms of a field, or of several components combined in
    /// quadrature. The mean is ignored.
    pub fn table(&self, components: &[&SpectralField]) -> BlockTable {
        let (q0, q1) = self.q_range;
        let (k0, k1) = self.k_range;
        let nq = (q1 - q0 + 1).max(0) as usize;
        let nk = (k1 - k0 + 1).max(0) as usize;
        let mut qk = vec![0.0; nq * nk];
        let mut iso = vec![0.0; nq];
        let mut axis = vec![0.0; nq];
        let mut mean = 0.0;
        let mut axis_total = 0.0;
        for f in components {
            debug_assert_eq!(f.grid(), &self.grid);
            mean += f.mean().norm_sqr();
            for (i, c) in f.coeffs().iter().enumerate().skip(1) {
                let e = c.norm_sqr();
                if e == 0.0 {
                    continue;
                }
                let xw = &self.x1[i];
                if xw.is_empty() {
                    axis_total += e;
                }
                for &(q, wq) in self.iso[i].as_slice() {
                    let qi = (q - q0) as usize;
                    let eq = e * wq * wq;
                    iso[qi] += eq;
                    if xw.is_empty() {
                        axis[qi] += eq;
                    }
                    for &(k, wk) in xw.as_slice() {
                        qk[qi * nk + (k - k0) as usize] += eq * wk * wk;
                    }
                }
            }
        }
        for v in qk.iter_mut().chain(iso.iter_mut()).chain(axis.iter_mut()) {
            *v = v.sqrt();
        }
        BlockTable {
            q0,
            k0,
            nq,
            nk,
            qk,
            iso,
            axis,
            axis_total: axis_total.sqrt(),
            mean: mean.sqrt(),
        }
    }

    /// As [`table`](Self::table), refusing fields whose mean is not negligible.
    pub fn checked_table(&self, components: &[&SpectralField]) -> Result<BlockTable, LpError> {
        let mut total = 0.0;
        let mut mean = 0.0;
        for f in components {
            self.grid.check_same(f.grid())?;
            total += f.l2_norm().powi(2);
            mean += f.mean().norm_sqr();
        }
        let (total, mean) = (total.sqrt(), mean.sqrt());
        if mean > MEAN_TOLERANCE * total {
            return Err(LpError::NonZeroMean { mean });
        }
        Ok(self.table(components))
    }

    /// `‖f‖_{B^s} = Σ_q 2^{qs} ‖Δ_q f‖`.
    pub fn besov_norm(&self, f: &SpectralField, s: f64) -> Result<f64, LpError> {
        Ok(self.checked_table(&[f])?.besov(s))
    }

    /// `‖f‖_{B̂^s} = Σ_{q,k} 2^{qs} ‖Δ_q Δ_k¹ f‖`.
    pub fn hat_besov_norm(&self, f: &SpectralField, s: f64) -> Result<f64, LpError> {
        Ok(self.checked_table(&[f])?.hat(s))
    }

    /// `‖f‖_{B̃^{s,t}}`, the two-regime weighted sum.
    pub fn hybrid_norm(&self, f: &SpectralField, s: f64, t: f64) -> Result<f64, LpError> {
        Ok(self.checked_table(&[f])?.hybrid(s, t))
    }

    /// Smallest `C` with `max(‖φ‖_{B̂^s}, ‖φ‖_{B̂^t}) ≤ C ‖φ‖_{B̃^{s,t}}` for
    /// every field on this grid: the largest ratio of the hat weights to the
    /// hybrid weight over the active blocks.
    pub fn hybrid_calibration(&self, s: f64, t: f64) -> f64 {
        let mut c: f64 = 0.0;
        for q in self.q_range() {
            for k in self.k_range() {
                if !self.is_active(q, k) {
                    continue;
                }
                let hat = 2f64.powf(q as f64 * s).max(2f64.powf(q as f64 * t));
                c = c.max(hat / hybrid_weight(q, k, s, t));
            }
        }
        c
    }

    pub(crate) fn weights_product(&self, idx: usize, q: i32, k: i32) -> f64 {
        self.iso[idx].weight(q) * self.x1[idx].weight(k)
    }
}

/// `‖Δ_q Δ_k¹ f‖`, `‖Δ_q f‖` and the axis bucket per shell for one field
/// (or several components combined in quadrature).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTable {
    q0: i32,
    k0: i32,
    nq: usize,
    nk: usize,
    qk: Vec<f64>,
    iso: Vec<f64>,
    axis: Vec<f64>,
    axis_total: f64,
    mean: f64,
}

impl BlockTable {
    pub fn q_range(&self) -> RangeInclusive<i32> {
        self.q0..=self.q0 + self.nq as i32 - 1
    }

    pub fn k_range(&self) -> RangeInclusive<i32> {
        self.k0..=self.k0 + self.nk as i32 - 1
    }

    /// `‖Δ_q Δ_k¹ f‖`, zero outside the tabulated range.
    pub fn get(&self, q: i32, k: i32) -> f64 {
        if !self.q_range().contains(&q) || !self.k_range().contains(&k) {
            return 0.0;
        }
        self.qk[(q - self.q0) as usize * self.nk + (k - self.k0) as usize]
    }

    /// `‖Δ_q f‖` including the axis modes.
    pub fn shell(&self, q: i32) -> f64 {
        if !self.q_range().contains(&q) {
            return 0.0;
        }
        self.iso[(q - self.q0) as usize]
    }

    /// Norm of the `ξ₁ = 0` part of shell `q`.
    pub fn axis_shell(&self, q: i32) -> f64 {
        if !self.q_range().contains(&q) {
            return 0.0;
        }
        self.axis[(q - self.q0) as usize]
    }

    /// `L²` norm of the whole axis bucket.
    pub fn axis_norm(&self) -> f64 {
        self.axis_total
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Every `(q, k, ‖Δ_q Δ_k¹ f‖)` in the tabulated range, `k` fastest.
    pub fn entries(&self) -> impl Iterator<Item = (i32, i32, f64)> + '_ {
        (0..self.nq).flat_map(move |qi| {
            (0..self.nk).map(move |ki| {
                (
                    self.q0 + qi as i32,
                    self.k0 + ki as i32,
                    self.qk[qi * self.nk + ki],
                )
            })
        })
    }

    /// `Σ weight(q, k)·‖Δ_qΔ_k¹f‖` over nonzero blocks; `+0.0` when there are none.
    pub fn weighted_sum(&self, weight: impl Fn(i32, i32) -> f64) -> f64 {
        self.entries()
            .filter(|e| e.2 != 0.0)
            .map(|(q, k, v)| weight(q, k) * v)
            .sum::<f64>()
            + 0.0
    }

    pub fn besov(&self, s: f64) -> f64 {
        self.q_range()
            .zip(&self.iso)
            .filter(|(_, v)| **v != 0.0)
            .map(|(q, v)| 2f64.powf(q as f64 * s) * v)
            .sum::<f64>()
            + 0.0
    }

    pub fn hat(&self, s: f64) -> f64 {
        self.weighted_sum(|q, _| 2f64.powf(q as f64 * s))
    }

    pub fn hybrid(&self, s: f64, t: f64) -> f64 {
        self.weighted_sum(|q, k| hybrid_weight(q, k, s, t))
    }

    /// CSV with columns `q,k,l2_norm,regime` (regime 1 if `k+1 ≥ 2q`, else 2).
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "q,k,l2_norm,regime")?;
        for (q, k, v) in self.entries() {
            let regime = if is_regime1(q, k) { 1 } else { 2 };
            writeln!(w, "{q},{k},{v:.17e},{regime}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
/// Put `amplitude` (as an `L²` norm) into the real mode `±m`.
pub(crate) fn real_mode(grid: Grid, m1: i64, m2: i64, amplitude: f64) -> SpectralField {
    let mut f = SpectralField::zeros(grid);
    let idx = grid.index_of_mode(m1, m2).expect("mode on grid");
    let neg = grid.negate(idx);
    let c = num_complex::Complex64::new(amplitude / 2f64.sqrt(), 0.0);
    f.coeffs_mut()[idx] = c;
    f.coeffs_mut()[neg] = c;
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random::{gaussian, white};
    use crate::spectral::DEFAULT_LENGTH;

    fn layout() -> DyadicLayout {
        DyadicLayout::new(Grid::square(64, DEFAULT_LENGTH).unwrap())
    }

    #[test]
    fn single_mode_in_shell_zero() {
        let lay = layout();
        // |ξ| = 24/16 = 1.5, ξ₁ = 1.5: shells q = 0 and k = 0 with weight 1
        let f = real_mode(*lay.grid(), 24, 0, 0.7);
        assert!((lay.block(&f, 0).l2_norm() - 0.7).abs() < 1e-15);
        for q in lay.q_range() {
            if q != 0 {
                assert_eq!(lay.block(&f, q).l2_norm(), 0.0);
            }
        }
        assert!((lay.besov_norm(&f, 1.0).unwrap() - 0.7).abs() < 1e-15);
        assert!((lay.hat_besov_norm(&f, 3.0).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn one_shell_scaling() {
        let lay = layout();
        // |ξ| = 30√2/16 ≈ 2.65 lies on the q = 1 plateau
        let f = real_mode(*lay.grid(), 30, 30, 1.3);
        let scaled = lay.besov_norm(&f, 0.5).unwrap();
        assert!((scaled - 2f64.powf(0.5) * 1.3).abs() < 1e-14);
    }

    #[test]
    fn hybrid_branches() {
        let lay = layout();
        // regime 1: (q,k) = (0,0), 0 + 1 ≥ 0
        let f = real_mode(*lay.grid(), 24, 0, 2.0);
        assert!((lay.hybrid_norm(&f, 0.3, 1.0).unwrap() - 2.0).abs() < 1e-14);
        // regime 2: ξ = (1.5, 24) → q = 4 (|ξ| ≈ 24.05 on the [16,32] plateau), k = 0
        let g = Grid::new(64, 1024, DEFAULT_LENGTH, DEFAULT_LENGTH).unwrap();
        let lay2 = DyadicLayout::new(g);
        let f = real_mode(g, 24, 384, 2.0);
        let want = 2f64.powf(8.0 * 1.0) * 2.0; // 2^{(2q−k)t}
        assert!((lay2.hybrid_norm(&f, 0.3, 1.0).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn mean_is_refused() {
        let lay = layout();
        let f = &SpectralField::constant(*lay.grid(), 1.0) + &real_mode(*lay.grid(), 3, 1, 1.0);
        assert!(matches!(
            lay.besov_norm(&f, 0.0),
            Err(LpError::NonZeroMean { .. })
        ));
        assert_eq!(
            lay.besov_norm(&SpectralField::zeros(*lay.grid()), 1.0)
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn blocks_reconstruct_zero_mean_field() {
        let lay = layout();
        let f = white(*lay.grid(), 5).without_mean();
        let mut sum = SpectralField::zeros(*lay.grid());
        for q in lay.q_range() {
            sum += &lay.block(&f, q);
        }
        assert!((&sum - &f).l2_norm() / f.l2_norm() < 1e-12);
        let mut sum = lay.axis_part(&f);
        for q in lay.q_range() {
            for k in lay.k_range() {
                sum += &lay.block_qk(&f, q, k);
            }
        }
        assert!((&sum - &f).l2_norm() / f.l2_norm() < 1e-12);
    }

    #[test]
    fn separated_shells_are_orthogonal() {
        let lay = layout();
        let f = white(*lay.grid(), 6).without_mean();
        for q in lay.q_range() {
            for p in lay.q_range() {
                if (p - q).abs() >= 2 {
                    let a = lay.block(&f, q);
                    let b = lay.block(&f, p);
                    assert!(a.inner(&b).abs() < 1e-12 * f.l2_norm().powi(2));
                }
            }
        }
    }

    #[test]
    fn x1_shells_below_iso_shells() {
        let lay = layout();
        for idx in 1..lay.grid().len() {
            for &(q, _) in lay.iso_weights(idx).as_slice() {
                for &(k, _) in lay.x1_weights(idx).as_slice() {
                    assert!(k <= q + 1, "({q},{k})");
                }
            }
        }
    }

    #[test]
    fn hybrid_calibration_bounds_hat() {
        let lay = layout();
        let c = lay.hybrid_calibration(0.0, 1.0);
        for seed in 0..5 {
            let f = gaussian(*lay.grid(), seed, 1.0, true);
            let t = lay.table(&[&f]);
            let lhs = t.hat(0.0).max(t.hat(1.0));
            assert!(lhs <= c * t.hybrid(0.0, 1.0) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let lay = layout();
        let f = real_mode(*lay.grid(), 24, 0, 1.0);
        let mut out = Vec::new();
        lay.table(&[&f]).write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("q,k,l2_norm,regime"));
        let row = lines.find(|l| l.starts_with("0,0,")).unwrap();
        assert!(row.ends_with(",1"));
    }
}
