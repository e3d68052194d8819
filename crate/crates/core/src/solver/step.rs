//! Integrating-factor SSP-RK3.
//!
//! With `E(τ) = e^{τΔ}` acting on `u` only and `N` the explicit tendency,
//!
//! ```text
//! u⁽¹⁾   = E(dt) (uⁿ + dt N(uⁿ))
//! u⁽²⁾   = ¾ E(dt/2) uⁿ + ¼ E(−dt/2) (u⁽¹⁾ + dt N(u⁽¹⁾))
//! uⁿ⁺¹   = ⅓ E(dt) uⁿ + ⅔ E(dt/2) (u⁽²⁾ + dt N(u⁽²⁾))
//! ```
//!
//! `H` and `A` follow the same stages with `E = 1`. The diffusion is exact
//! per mode, so only transport limits `dt`.

use super::state::{MHDState, MatrixField};
use super::tendency::{explicit, Physics, Tendency};
use super::SolverError;
use crate::spectral::products::ProductSpace;
use crate::spectral::{Grid, SpectralField, VectorField};

/// CFL number of the transport limit.
pub const CFL: f64 = 0.5;

/// `min(CFL / (c k_max), 1)` with `c = max|u| + max|h₀ + H|` and `k_max` the
/// largest wavenumber kept by dealiasing.
pub fn stability_limit(s: &MHDState) -> f64 {
    let speed = |v: &VectorField, shift: f64| {
        let x = v.x.to_samples();
        let y = v.y.to_samples();
        x.iter()
            .zip(y.iter())
            .map(|(a, b)| (a + shift).hypot(*b))
            .fold(0.0, f64::max)
    };
    let c = speed(&s.u, 0.0) + speed(&s.h, 1.0);
    let k = s.grid().dealiased_kmax();
    if !(c * k > 0.0) {
        return 1.0;
    }
    (CFL / (c * k)).min(1.0)
}

fn heat(grid: &Grid, tau: f64, v: &VectorField) -> VectorField {
    let decay = move |idx: usize| (-grid.xi_norm(idx).powi(2) * tau).exp();
    let apply = |f: &SpectralField| {
        let mut out = f.clone();
        for (idx, c) in out.coeffs_mut().iter_mut().enumerate() {
            *c *= decay(idx);
        }
        out
    };
    VectorField {
        x: apply(&v.x),
        y: apply(&v.y),
    }
}

fn euler(s: &MHDState, dt: f64, n: &Tendency) -> MHDState {
    let mut a: MatrixField = s.a.clone();
    for i in 0..2 {
        for k in 0..2 {
            a[i][k].axpy(dt, &n.da[i][k]);
        }
    }
    let mut u = s.u.clone();
    u.axpy(dt, &n.du);
    let mut h = s.h.clone();
    h.axpy(dt, &n.dh);
    MHDState {
        u,
        h,
        a,
        t: s.t + dt,
    }
}

fn blend(wa: f64, a: &MHDState, wb: f64, b: &MHDState) -> (VectorField, MatrixField) {
    let h = &a.h.scaled(wa) + &b.h.scaled(wb);
    let mut m = a.a.clone();
    for i in 0..2 {
        for k in 0..2 {
            m[i][k] = &a.a[i][k].scaled(wa) + &b.a[i][k].scaled(wb);
        }
    }
    (h, m)
}

/// Advances states by one step.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    space: ProductSpace,
    physics: Physics,
}

impl Stepper {
    pub fn new(grid: Grid, physics: Physics) -> Self {
        Self {
            grid,
            space: ProductSpace::new(grid),
            physics,
        }
    }

    pub fn physics(&self) -> Physics {
        self.physics
    }

    /// One step of size `dt`; refuses steps above [`stability_limit`].
    pub fn step(&self, s: &MHDState, dt: f64) -> Result<MHDState, SolverError> {
        self.grid.check_same(s.grid())?;
        let limit = stability_limit(s);
        if !(dt <= limit * (1.0 + 1e-12)) {
            return Err(SolverError::StabilityLimit { dt, limit });
        }
        Ok(self.step_unchecked(s, dt))
    }

    pub fn step_unchecked(&self, s: &MHDState, dt: f64) -> MHDState {
        let g = &self.grid;
        let n = |x: &MHDState| explicit(&self.space, self.physics, x);

        let mut s1 = euler(s, dt, &n(s));
        s1.u = heat(g, dt, &s1.u);

        let e1 = euler(&s1, dt, &n(&s1));
        let (h2, a2) = blend(0.75, s, 0.25, &e1);
        let u2 = &heat(g, 0.5 * dt, &s.u).scaled(0.75) + &heat(g, -0.5 * dt, &e1.u).scaled(0.25);
        let s2 = MHDState {
            u: u2,
            h: h2,
            a: a2,
            t: s.t + 0.5 * dt,
        };

        let e2 = euler(&s2, dt, &n(&s2));
        let (h3, a3) = blend(1.0 / 3.0, s, 2.0 / 3.0, &e2);
        let u3 = &heat(g, dt, &s.u).scaled(1.0 / 3.0) + &heat(g, 0.5 * dt, &e2.u).scaled(2.0 / 3.0);
        MHDState {
            u: u3.leray_project(),
            h: h3.leray_project(),
            a: a3,
            t: s.t + dt,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::init::single_mode_field;
    use crate::spectral::DEFAULT_LENGTH;

    fn grid() -> Grid {
        Grid::square(32, DEFAULT_LENGTH).unwrap()
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = grid();
        let s = MHDState::equilibrium(g);
        let st = Stepper::new(g, Physics::default());
        let next = st.step(&s, 1e-2).unwrap();
        assert_eq!(next.u, s.u);
        assert_eq!(next.h, s.h);
        assert_eq!(next.a, s.a);
    }

    #[test]
    fn axis_mode_heat_decay() {
        let g = Grid::square(32, 2.0 * std::f64::consts::PI).unwrap();
        let mut s = MHDState::equilibrium(g);
        s.u = single_mode_field(g, (0, 1), 1e-3, 0.0);
        let u0 = s.u.clone();
        let st = Stepper::new(
            g,
            Physics {
                nonlinear: false,
                evolve_a: false,
            },
        );
        for _ in 0..1000 {
            s = st.step(&s, 1e-3).unwrap();
        }
        let want = u0.scaled((-1.0f64).exp());
        assert!((&s.u - &want).l2_norm() < 1e-8 * u0.l2_norm());
    }

    #[test]
    fn rejects_oversized_step() {
        let g = grid();
        let s = MHDState::equilibrium(g);
        let st = Stepper::new(g, Physics::default());
        let lim = stability_limit(&s);
        assert!(matches!(
            st.step(&s, 2.0 * lim),
            Err(SolverError::StabilityLimit { .. })
        ));
    }
}
