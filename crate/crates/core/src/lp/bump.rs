//! Dyadic bump and the partition of unity built from it.
//!
//! `ρ` equals 1 on `[1, 2]`, vanishes outside `(5/6, 12/5)` and joins the two
//! with the quintic smoothstep `6x⁵ − 15x⁴ + 10x³`, which is C² at the joints.
//! The normalized bump is `ψ(r) = ρ(r) / Σ_j ρ(2^{-j} r)`, so that
//! `Σ_q ψ(2^{-q} r) = 1` for every `r > 0`.

pub const INNER: f64 = 5.0 / 6.0;
pub const OUTER: f64 = 12.0 / 5.0;

fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (x * (6.0 * x - 15.0) + 10.0)
}

/// Unnormalized radial profile.
pub fn rho(r: f64) -> f64 {
    if r <= INNER || r >= OUTER {
        0.0
    } else if r < 1.0 {
        smoothstep((r - INNER) / (1.0 - INNER))
    } else if r <= 2.0 {
        1.0
    } else {
        smoothstep((OUTER - r) / (OUTER - 2.0))
    }
}

/// Range of `j` that can give `ρ(2^{-j} r) ≠ 0`.
fn shell_range(r: f64) -> std::ops::RangeInclusive<i32> {
    let l = r.log2().floor() as i32;
    (l - 2)..=(l + 1)
}

/// Normalized bump `ψ(r)`; zero for `r ≤ 0`.
pub fn psi(r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let denom: f64 = shell_range(r).map(|j| rho(r * 2f64.powi(-j))).sum();
    rho(r) / denom
}

/// Nonzero shell weights `(q, ψ(2^{-q} r))` of the radius `r`; at most two.
pub fn shell_weights(r: f64) -> ShellWeights {
    let mut out = ShellWeights::default();
    if !(r > 0.0) {
        return out;
    }
    let mut raw = [(0i32, 0.0f64); 4];
    let mut denom = 0.0;
    for (slot, j) in raw.iter_mut().zip(shell_range(r)) {
        let v = rho(r * 2f64.powi(-j));
        *slot = (j, v);
        denom += v;
    }
    for (j, v) in raw {
        if v > 0.0 {
            out.push(j, v / denom);
        }
    }
    out
}

/// Up to two `(shell, weight)` pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ShellWeights {
    len: u8,
    items: [(i32, f64); 2],
}

impl ShellWeights {
    fn push(&mut self, q: i32, w: f64) {
        assert!(
            self.len < 2,
            "annulus ratio admits at most two overlapping shells"
        );
        self.items[self.len as usize] = (q, w);
        self.len += 1;
    }

    pub fn as_slice(&self) -> &[(i32, f64)] {
        &self.items[..self.len as usize]
    }

    pub fn weight(&self, q: i32) -> f64 {
        self.as_slice()
            .iter()
            .find(|(p, _)| *p == q)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}
