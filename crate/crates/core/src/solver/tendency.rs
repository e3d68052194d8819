use ndarray::Array2;

use super::state::{MHDState, MatrixField};
use crate::spectral::products::ProductSpace;
use crate::spectral::{Axis, SpectralField, VectorField};

/// Which terms of the system are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Physics {
    pub nonlinear: bool,
    pub evolve_a: bool,
}

impl Default for Physics {
    fn default() -> Self {
        Self {
            nonlinear: true,
            evolve_a: true,
        }
    }
}

/// Time derivatives of `(u, H, A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tendency {
    pub du: VectorField,
    pub dh: VectorField,
    pub da: MatrixField,
}

/// Grid values of a field and its two derivatives.
struct Jet {
    v: Array2<f64>,
    d: [Array2<f64>; 2],
}

impl Jet {
    fn new(space: &ProductSpace, f: &SpectralField) -> Self {
        Self {
            v: space.to_physical(f),
            d: [
                space.to_physical(&f.partial(Axis::X1)),
                space.to_physical(&f.partial(Axis::X2)),
            ],
        }
    }

    /// `w·∇f` for a velocity given by grid values.
    fn advect(&self, w: [&Array2<f64>; 2]) -> Array2<f64> {
        w[0] * &self.d[0] + w[1] * &self.d[1]
    }
}

/// Explicit part: everything except `Δu`.
pub(crate) fn explicit(space: &ProductSpace, physics: Physics, s: &MHDState) -> Tendency {
    let grid = *s.grid();
    let dx1_h = VectorField {
        x: s.h.x.partial(Axis::X1),
        y: s.h.y.partial(Axis::X1),
    };
    let dx1_u = VectorField {
        x: s.u.x.partial(Axis::X1),
        y: s.u.y.partial(Axis::X1),
    };
    let mut du = dx1_h;
    let mut dh = dx1_u;
    let grad_u = [
        [s.u.x.partial(Axis::X1), s.u.x.partial(Axis::X2)],
        [s.u.y.partial(Axis::X1), s.u.y.partial(Axis::X2)],
    ];
    let mut da: MatrixField = if physics.evolve_a {
        [
            [-&grad_u[0][0], -&grad_u[0][1]],
            [-&grad_u[1][0], -&grad_u[1][1]],
        ]
    } else {
        let z = SpectralField::zeros(grid);
        [[z.clone(), z.clone()], [z.clone(), z]]
    };
    if physics.nonlinear {
        let u = [Jet::new(space, &s.u.x), Jet::new(space, &s.u.y)];
        let h = [Jet::new(space, &s.h.x), Jet::new(space, &s.h.y)];
        let uv = [&u[0].v, &u[1].v];
        let hv = [&h[0].v, &h[1].v];
        let nu = |i: usize| space.from_physical(&(h[i].advect(hv) - u[i].advect(uv)));
        let nh = |i: usize| space.from_physical(&(u[i].advect(hv) - h[i].advect(uv)));
        du = VectorField {
            x: &du.x + &nu(0),
            y: &du.y + &nu(1),
        };
        dh = VectorField {
            x: &dh.x + &nh(0),
            y: &dh.y + &nh(1),
        };
        if physics.evolve_a {
            let pa = s.a_pert();
            let ap: Vec<Vec<Jet>> = pa
                .iter()
                .map(|row| row.iter().map(|f| Jet::new(space, f)).collect())
                .collect();
            for i in 0..2 {
                for k in 0..2 {
                    // −u·∇𝒜_ik − Σ_j 𝒜_ij ∂_k u_j
                    let mut acc = -ap[i][k].advect(uv);
                    for j in 0..2 {
                        acc = acc - &ap[i][j].v * &u[j].d[k];
                    }
                    da[i][k] = &da[i][k] + &space.from_physical(&acc);
                }
            }
        }
    }
    Tendency {
        du: du.leray_project(),
        dh: dh.leray_project(),
        da,
    }
}

/// Full right-hand side: `du = P(−u·∇u + H·∇H + ∂₁H) + Δu`,
/// `dH = P(∂₁u + H·∇u − u·∇H)`, `dA = −u·∇A − A∇u`, with all quadratic
/// products dealiased.
pub fn tendency(s: &MHDState, physics: Physics) -> Tendency {
    let space = ProductSpace::new(*s.grid());
    let mut t = explicit(&space, physics, s);
    t.du = VectorField {
        x: &t.du.x + &s.u.x.laplacian(),
        y: &t.du.y + &s.u.y.laplacian(),
    };
    t
}

/// `H·∇H − u·∇u` with dealiased products, before projection.
pub fn quadratic_force(space: &ProductSpace, s: &MHDState) -> VectorField {
    let u = [Jet::new(space, &s.u.x), Jet::new(space, &s.u.y)];
    let h = [Jet::new(space, &s.h.x), Jet::new(space, &s.h.y)];
    let uv = [&u[0].v, &u[1].v];
    let hv = [&h[0].v, &h[1].v];
    let f = |i: usize| space.from_physical(&(h[i].advect(hv) - u[i].advect(uv)));
    VectorField { x: f(0), y: f(1) }
}

/// Total pressure `Π = P + ½|B|²` from `ΔΠ = div(H·∇H − u·∇u)`, zero mean.
pub fn pressure_diagnostic(s: &MHDState) -> SpectralField {
    quadratic_force(&ProductSpace::new(*s.grid()), s)
        .divergence()
        .inverse_laplacian()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::init::single_mode_field;
    use crate::spectral::products::product_padded;
    use crate::spectral::{Grid, DEFAULT_LENGTH};

    fn grid() -> Grid {
        Grid::square(32, DEFAULT_LENGTH).unwrap()
    }

    #[test]
    fn equilibrium_is_stationary() {
        let s = MHDState::equilibrium(grid());
        let t = tendency(&s, Physics::default());
        assert_eq!(t.du.l2_norm() + t.dh.l2_norm(), 0.0);
        assert!(t.da.iter().flatten().all(|f| f.l2_norm() == 0.0));
    }

    #[test]
    fn axis_mode_diffuses() {
        let g = grid();
        let mut s = MHDState::equilibrium(g);
        s.u = single_mode_field(g, (0, 1), 1e-3, 0.0);
        let t = tendency(
            &s,
            Physics {
                nonlinear: false,
                evolve_a: true,
            },
        );
        let k2 = g.xi_norm(g.index_of_mode(0, 1).unwrap()).powi(2);
        assert!((&t.du + &s.u.scaled(k2)).l2_norm() < 1e-15);
        assert!(t.dh.l2_norm() < 1e-18);
    }

    #[test]
    fn gradient_tendency_at_identity() {
        let g = grid();
        let mut s = MHDState::equilibrium(g);
        s.u = single_mode_field(g, (2, 3), 1e-2, 0.3);
        let t = tendency(&s, Physics::default());
        for (i, ui) in [&s.u.x, &s.u.y].into_iter().enumerate() {
            for (k, ax) in [Axis::X1, Axis::X2].into_iter().enumerate() {
                assert!((&t.da[i][k] + &ui.partial(ax)).l2_norm() < 1e-16);
            }
        }
    }

    #[test]
    fn pressure_matches_padded_convolution() {
        let g = grid();
        let mut s = MHDState::equilibrium(g);
        s.u = &single_mode_field(g, (2, 1), 1e-2, 0.3) + &single_mode_field(g, (1, -3), 1e-2, 1.1);
        let p = pressure_diagnostic(&s);
        let c = |a: &SpectralField, b: &SpectralField| {
            product_padded(a, b).unwrap().truncated(g).unwrap()
        };
        let adv =
            |f: &SpectralField| &c(&s.u.x, &f.partial(Axis::X1)) + &c(&s.u.y, &f.partial(Axis::X2));
        let div = &adv(&s.u.x).partial(Axis::X1) + &adv(&s.u.y).partial(Axis::X2);
        let want = -&div.inverse_laplacian();
        assert!((&p - &want).l2_norm() < 1e-12 * want.l2_norm());
    }

    #[test]
    fn pressure_gradient_completes_projection() {
        let g = grid();
        let mut s = MHDState::equilibrium(g);
        s.u = &single_mode_field(g, (2, 1), 1e-2, 0.3) + &single_mode_field(g, (0, 3), 1e-2, 0.1);
        s.h = &single_mode_field(g, (-1, 2), 1e-2, 0.7) + &single_mode_field(g, (3, 1), 1e-2, 2.0);
        let space = ProductSpace::new(g);
        let full = explicit(
            &space,
            Physics {
                nonlinear: true,
                evolve_a: false,
            },
            &s,
        );
        let p = pressure_diagnostic(&s);
        let want = quadratic_force(&space, &s);
        let dx1h = VectorField {
            x: s.h.x.partial(Axis::X1),
            y: s.h.y.partial(Axis::X1),
        };
        let recon = VectorField {
            x: &(&full.du.x + &p.partial(Axis::X1)) - &dx1h.x,
            y: &(&full.du.y + &p.partial(Axis::X2)) - &dx1h.y,
        };
        assert!(want.l2_norm() > 0.0);
        assert!((&recon - &want).l2_norm() < 1e-10 * want.l2_norm());
    }
}
