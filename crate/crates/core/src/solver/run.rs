use super::config::SolverConfig;
use super::init::init_state;
use super::state::MHDState;
use super::step::{stability_limit, Stepper};
use super::tendency::Physics;
use super::{BlowUpReport, SolverError};

/// A state handed to the observer of [`run`].
#[derive(Debug, Clone, Copy)]
pub struct RunEvent<'a> {
    /// Steps completed.
    pub step: usize,
    pub state: &'a MHDState,
    /// True for the state at `t_end`.
    pub last: bool,
}

fn max_abs_all<'a>(fields: impl IntoIterator<Item = &'a crate::spectral::SpectralField>) -> f64 {
    fields.into_iter().map(|f| f.max_abs()).fold(0.0, f64::max)
}

fn blow_up(s: &MHDState, step: usize, reason: String) -> SolverError {
    let pa = s.a_pert();
    SolverError::BlowUp(Box::new(BlowUpReport {
        t: s.t,
        step,
        reason,
        max_u: max_abs_all([&s.u.x, &s.u.y]),
        max_h: max_abs_all([&s.h.x, &s.h.y]),
        max_a: max_abs_all(pa.iter().flatten()),
    }))
}

/// Integrates `cfg` from its initial state to `t_end`.
///
/// The observer sees the initial state, every `cadence`-th state and the final
/// one. A state that turns non-finite, or a step size the flow has outgrown,
/// ends the run with [`SolverError::BlowUp`] describing the last finite
/// state; everything the observer received before stays valid.
pub fn run<F>(cfg: &SolverConfig, mut observer: F) -> Result<MHDState, SolverError>
where
    F: FnMut(RunEvent<'_>) -> Result<(), SolverError>,
{
    cfg.validate()?;
    let mut state = init_state(cfg)?;
    let limit = stability_limit(&state);
    if cfg.dt > limit {
        return Err(SolverError::StabilityLimit { dt: cfg.dt, limit });
    }
    let steps = cfg.step_count();
    observer(RunEvent {
        step: 0,
        state: &state,
        last: steps == 0,
    })?;
    let stepper = Stepper::new(
        cfg.grid,
        Physics {
            nonlinear: cfg.nonlinear,
            evolve_a: cfg.evolve_a,
        },
    );
    for n in 1..=steps {
        let dt = if n == steps {
            cfg.t_end - state.t
        } else {
            cfg.dt
        };
        let next = match stepper.step(&state, dt) {
            Ok(s) => s,
            Err(SolverError::StabilityLimit { dt, limit }) => {
                return Err(blow_up(
                    &state,
                    n - 1,
                    format!("step {dt} above stability limit {limit:.3e}"),
                ));
            }
            Err(e) => return Err(e),
        };
        if !next.is_finite() {
            return Err(blow_up(&state, n - 1, "non-finite values".into()));
        }
        let mut next = next;
        if n == steps {
            next.t = cfg.t_end;
        }
        state = next;
        if n == steps || n % cfg.cadence == 0 {
            observer(RunEvent {
                step: n,
                state: &state,
                last: n == steps,
            })?;
        }
    }
    Ok(state)
}
