//! Cartesian parameter sweeps for design studies.

use rayon::prelude::*;

use crate::calibration::ParamPath;
use crate::error::{Error, Result};
use crate::integrator::{integrate, SolverConfig, Status};
use crate::metrics::{cooking_power_series, standardized_cooking_power, StdPowerMethod};
use crate::thermal::{CookerParams, CookerState, Environment};

pub const MAX_GRID_POINTS: usize = 1_000_000;

/// One axis of a sweep: `steps` evenly spaced values from `lower` to `upper`
/// inclusive. A single step uses `lower`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub param: ParamPath,
    pub lower: f64,
    pub upper: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn new(param: ParamPath, lower: f64, upper: f64, steps: usize) -> Result<Self> {
        let axis = Self {
            param,
            lower,
            upper,
            steps,
        };
        axis.check()?;
        Ok(axis)
    }

    fn check(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::domain(format!("{}: steps must be >= 1", self.param)));
        }
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower <= self.upper) {
            return Err(Error::domain(format!(
                "{}: bounds must be finite with lower <= upper, got [{}, {}]",
                self.param, self.lower, self.upper
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lower];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.upper
                } else {
                    self.lower + (self.upper - self.lower) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// One value per axis, in axis order.
    pub values: Vec<f64>,
    /// s
    pub boiling_time: Option<f64>,
    /// W, when the run's power curve brackets ΔT = 50 K.
    pub standardized_power: Option<f64>,
    /// K
    pub final_t_fluid: Option<f64>,
    /// Why the run failed, if it did.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub params: Vec<ParamPath>,
    pub rows: Vec<SweepRow>,
}

fn evaluate(
    params: &CookerParams,
    env: &Environment,
    initial: &CookerState,
    cfg: &SolverConfig,
    values: Vec<f64>,
) -> SweepRow {
    let mut row = SweepRow {
        values,
        boiling_time: None,
        standardized_power: None,
        final_t_fluid: None,
        failure: None,
    };
    match integrate(params, env, initial, cfg) {
        Ok(run) => {
            row.boiling_time = run.boiling_time();
            row.final_t_fluid = run.samples.last().map(|s| s.state.t_fluid);
            row.standardized_power = cooking_power_series(&run)
                .and_then(|c| standardized_cooking_power(&c, StdPowerMethod::Interpolate))
                .ok();
            if let Status::StepFailure(t) = run.status {
                row.failure = Some(format!("step size underflow at t = {t} s"));
            }
        }
        Err(e) => row.failure = Some(e.to_string()),
    }
    row
}

/// Runs the model at every point of the cartesian product of `grid`. The
/// first axis varies slowest. Points are evaluated in parallel; a failing
/// point is recorded in its row and does not stop the sweep.
pub fn sweep(
    base: &CookerParams,
    env: &Environment,
    initial: &CookerState,
    cfg: &SolverConfig,
    grid: &[GridAxis],
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::domain("a sweep needs at least one axis"));
    }
    let mut total = 1usize;
    for axis in grid {
        axis.check()?;
        total = total
            .checked_mul(axis.steps)
            .filter(|&t| t <= MAX_GRID_POINTS)
            .ok_or_else(|| {
                Error::domain(format!("grid exceeds {MAX_GRID_POINTS} points"))
            })?;
    }
    let axes: Vec<Vec<f64>> = grid.iter().map(GridAxis::values).collect();

    let rows = (0..total)
        .into_par_iter()
        .map(|mut index| {
            let mut values = vec![0.0; axes.len()];
            for (k, vals) in axes.iter().enumerate().rev() {
                values[k] = vals[index % vals.len()];
                index /= vals.len();
            }
            let mut p = base.clone();
            for (axis, &v) in grid.iter().zip(&values) {
                axis.param.set(&mut p, v);
            }
            evaluate(&p, env, initial, cfg, values)
        })
        .collect();

    Ok(SweepResult {
        params: grid.iter().map(|a| a.param).collect(),
        rows,
    })
}
