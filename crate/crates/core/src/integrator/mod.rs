//! Time integration of the cooker model.
//!
//! [`integrate`] runs the adaptive Dormand–Prince solver with a boiling stop
//! event; [`integrate_fixed_step`] runs classical RK4 at a constant step and is
//! mainly useful for convergence studies.

pub mod ode;

use crate::error::{Error, Result};
use crate::thermal::{compute_fluxes, rhs, CookerParams, CookerState, Environment, FluxBreakdown};
use crate::units::celsius_to_kelvin;

pub use ode::{AdaptiveOptions, Outcome, StepStats, Trajectory, EVENT_TOLERANCE, MIN_STEP};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub rel_tol: f64,
    /// K
    pub abs_tol: f64,
    /// s
    pub h_init: f64,
    /// s
    pub h_max: f64,
    /// s
    pub t_end: f64,
    /// Fluid temperature that stops the run, K.
    pub boiling_point: f64,
    /// Spacing of emitted samples, s.
    pub output_interval: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-8,
            h_init: 1.0,
            h_max: 300.0,
            t_end: 10_800.0,
            boiling_point: celsius_to_kelvin(100.0),
            output_interval: 60.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |path: &str, ok: bool, v: f64, what: &str| {
            if ok && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(format!("solver.{path}"), format!("{what}, got {v}")))
            }
        };
        check("rel_tol", self.rel_tol > 0.0, self.rel_tol, "must be > 0")?;
        check("abs_tol", self.abs_tol > 0.0, self.abs_tol, "must be > 0")?;
        check("h_init", self.h_init > 0.0, self.h_init, "must be > 0")?;
        check(
            "h_max",
            self.h_max >= self.h_init,
            self.h_max,
            "must be >= h_init",
        )?;
        check("t_end", self.t_end > 0.0, self.t_end, "must be > 0")?;
        check(
            "boiling_point",
            self.boiling_point > celsius_to_kelvin(0.0),
            self.boiling_point,
            "must be above 273.15 K",
        )?;
        check(
            "output_interval",
            self.output_interval > 0.0,
            self.output_interval,
            "must be > 0",
        )
    }

    fn adaptive_options(&self) -> AdaptiveOptions {
        AdaptiveOptions {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            h_init: self.h_init,
            h_max: self.h_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Status {
    ReachedEnd,
    /// The fluid reached the boiling point at this time, s.
    Boiled(f64),
    /// The step size collapsed at this time, s.
    StepFailure(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub state: CookerState,
    pub fluxes: FluxBreakdown,
    /// Heat delivered to the fluid, W.
    pub cooking_power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub samples: Vec<Sample>,
    pub status: Status,
    pub stats: StepStats,
}

impl SimulationResult {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.state.time)
    }

    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn boiling_time(&self) -> Option<f64> {
        match self.status {
            Status::Boiled(t) => Some(t),
            _ => None,
        }
    }

    /// Simulated time span `(start, end)` in s.
    pub fn span(&self) -> (f64, f64) {
        (self.first().state.time, self.last().state.time)
    }

    /// Fluid temperature at time `t`, linearly interpolated between samples.
    /// Times within 1 ns of a sample return that sample exactly.
    pub fn fluid_temperature_at(&self, t: f64) -> Result<f64> {
        let (start, end) = self.span();
        let snap = 1e-9;
        if !(t >= start - snap && t <= end + snap) {
            return Err(Error::range(format!(
                "time {t} s is outside the simulated span [{start}, {end}] s"
            )));
        }
        let i = self.samples.partition_point(|s| s.state.time < t);
        let at = |k: usize| &self.samples[k].state;
        if i < self.samples.len() && (at(i).time - t).abs() <= snap {
            return Ok(at(i).t_fluid);
        }
        if i > 0 && (t - at(i - 1).time).abs() <= snap {
            return Ok(at(i - 1).t_fluid);
        }
        let (a, b) = (at(i - 1), at(i));
        let w = (t - a.time) / (b.time - a.time);
        Ok(a.t_fluid + w * (b.t_fluid - a.t_fluid))
    }
}

fn check_inputs(
    params: &CookerParams,
    env: &Environment,
    initial: &CookerState,
    cfg: &SolverConfig,
) -> Result<()> {
    params.validate()?;
    env.validate()?;
    cfg.validate()?;
    initial.validate()
}

fn assemble(
    traj: Trajectory<3>,
    params: &CookerParams,
    env: &Environment,
) -> Result<SimulationResult> {
    let samples = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, y)| {
            let state = CookerState::from_array(t, y);
            let fluxes = compute_fluxes(&state, params, env)?;
            Ok(Sample {
                state,
                fluxes,
                cooking_power: fluxes.fluid_net(),
            })
        })
        .collect::<Result<Vec<_>>>();
    let status = match traj.outcome {
        Outcome::ReachedEnd => Status::ReachedEnd,
        Outcome::Event(t) => Status::Boiled(t),
        Outcome::StepFailure(t) => Status::StepFailure(t),
    };
    let samples = match samples {
        Ok(s) => s,
        // A diverging run can leave the flux domain on its last emitted
        // states; keep the valid prefix and report the failure.
        Err(_) if matches!(status, Status::StepFailure(_)) => {
            let mut ok = Vec::new();
            for (&t, y) in traj.times.iter().zip(&traj.states) {
                let state = CookerState::from_array(t, y);
                match compute_fluxes(&state, params, env) {
                    Ok(fluxes) => ok.push(Sample {
                        state,
                        fluxes,
                        cooking_power: fluxes.fluid_net(),
                    }),
                    Err(_) => break,
                }
            }
            ok
        }
        Err(e) => return Err(e),
    };
    Ok(SimulationResult {
        samples,
        status,
        stats: traj.stats,
    })
}

fn system<'a>(
    params: &'a CookerParams,
    env: &'a Environment,
) -> impl FnMut(f64, &[f64; 3]) -> Result<[f64; 3]> + 'a {
    move |t, y| {
        let state = CookerState::from_array(t, y);
        state.validate()?;
        Ok(rhs(&state, params, env)?.as_array())
    }
}

/// Integrates the cooker from `initial` until `cfg.t_end` or until the fluid
/// reaches `cfg.boiling_point`, whichever comes first.
pub fn integrate(
    params: &CookerParams,
    env: &Environment,
    initial: &CookerState,
    cfg: &SolverConfig,
) -> Result<SimulationResult> {
    check_inputs(params, env, initial, cfg)?;
    let boil = cfg.boiling_point;
    let traj = ode::dopri5(
        system(params, env),
        initial.time,
        initial.temperatures(),
        initial.time + cfg.t_end,
        cfg.output_interval,
        &cfg.adaptive_options(),
        Some(move |y: &[f64; 3]| y[2] - boil),
    )?;
    assemble(traj, params, env)
}

/// Same as [`integrate`] with classical RK4 at constant step `h` (s). Every
/// step is emitted; the boiling stop lands on the first step past the
/// boiling point.
pub fn integrate_fixed_step(
    params: &CookerParams,
    env: &Environment,
    initial: &CookerState,
    cfg: &SolverConfig,
    h: f64,
) -> Result<SimulationResult> {
    check_inputs(params, env, initial, cfg)?;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::domain(format!("step size must be positive, got {h}")));
    }
    let boil = cfg.boiling_point;
    let traj = ode::rk4(
        system(params, env),
        initial.time,
        initial.temperatures(),
        initial.time + cfg.t_end,
        h,
        Some(move |y: &[f64; 3]| y[2] - boil),
    )?;
    assemble(traj, params, env)
}
