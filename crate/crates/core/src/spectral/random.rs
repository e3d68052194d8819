//! Reproducible random real fields.
//!
//! Every conjugate pair of modes draws its coefficient from a generator seeded
//! by `(seed, m1, m2)`, so a field is the same function of `x` on any grid
//! that resolves its modes. Sweeps that compare grids rely on this.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Grid, SpectralField};

fn mode_rng(seed: u64, m1: i64, m2: i64) -> ChaCha8Rng {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for v in [m1 as u64, m2 as u64] {
        h = (h ^ v).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Canonical representative of the pair `{m, -m}`.
fn is_canonical(m1: i64, m2: i64) -> bool {
    m1 > 0 || (m1 == 0 && m2 > 0)
}

/// Zero-mean real field with coefficients `weight(ξ)·(a + ib)`, `a, b`
/// uniform in `[-1, 1]`, on the modes where `weight` is nonzero. Nyquist
/// modes are left empty.
pub fn weighted(
    grid: Grid,
    seed: u64,
    weight: impl Fn(i64, i64, f64, f64) -> f64,
) -> SpectralField {
    let mut f = SpectralField::zeros(grid);
    for idx in 0..grid.len() {
        if grid.is_nyquist(idx) {
            continue;
        }
        let (m1, m2) = grid.mode(idx);
        if !is_canonical(m1, m2) {
            continue;
        }
        let (a, b) = grid.xi(idx);
        let w = weight(m1, m2, a, b);
        if w == 0.0 {
            continue;
        }
        let mut rng = mode_rng(seed, m1, m2);
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * w;
        let neg = grid.negate(idx);
        f.coeffs_mut()[idx] = c;
        f.coeffs_mut()[neg] = c.conj();
    }
    f
}

/// Zero-mean real field with uniform weights on `max(|m1|, |m2|) <= band`.
pub fn band_limited(grid: Grid, seed: u64, band: i64) -> SpectralField {
    weighted(grid, seed, |m1, m2, _, _| {
        if m1.abs().max(m2.abs()) <= band {
            1.0
        } else {
            0.0
        }
    })
}

/// Zero-mean real field with Gaussian envelope `exp(-|ξ|²/(2σ²))`. With
/// `skip_axis` set, modes with `ξ₁ = 0` are left empty.
pub fn gaussian(grid: Grid, seed: u64, sigma: f64, skip_axis: bool) -> SpectralField {
    weighted(grid, seed, |m1, _, a, b| {
        if skip_axis && m1 == 0 {
            0.0
        } else {
            (-(a * a + b * b) / (2.0 * sigma * sigma)).exp()
        }
    })
}

/// White-noise real samples transformed to coefficients (full spectrum,
/// nonzero mean, Nyquist modes included).
pub fn white(grid: Grid, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = ndarray::Array2::from_shape_fn(grid.shape(), |_| rng.gen_range(-1.0..1.0));
    super::from_physical(grid, &samples)
}
