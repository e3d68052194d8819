//! Two-dimensional complex FFTs on row-major buffers, built from cached
//! one-dimensional `rustfft` plans.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

type Plan = Arc<dyn Fft<f64>>;

fn plan(len: usize, direction: FftDirection) -> Plan {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Plan>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (len, matches!(direction, FftDirection::Forward));
    let mut map = cache.lock().expect("fft plan cache poisoned");
    map.entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(len, direction))
        .clone()
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}

/// Unnormalized 2D FFT in place over a `(n1, n2)` row-major buffer.
pub(crate) fn fft2(buf: &mut [Complex64], n1: usize, n2: usize, direction: FftDirection) {
    debug_assert_eq!(buf.len(), n1 * n2);
    let rows = plan(n2, direction);
    rows.process(buf);
    let mut tmp = vec![Complex64::new(0.0, 0.0); buf.len()];
    transpose(buf, &mut tmp, n1, n2);
    let cols = plan(n1, direction);
    cols.process(&mut tmp);
    transpose(&tmp, buf, n2, n1);
}

/// Forward transform carrying the `1/(n1 n2)` factor, so `c(0,0)` is the mean.
pub(crate) fn forward(buf: &mut [Complex64], n1: usize, n2: usize) {
    fft2(buf, n1, n2, FftDirection::Forward);
    let scale = 1.0 / (n1 * n2) as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }
}

/// Inverse transform, no normalization: `f(x) = Σ c(ξ) e^{iξ·x}`.
pub(crate) fn inverse(buf: &mut [Complex64], n1: usize, n2: usize) {
    fft2(buf, n1, n2, FftDirection::Inverse);
}
