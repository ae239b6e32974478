//! Shared fixtures for the benchmarks.

use cooker_core::integrator::{integrate, SolverConfig};
use cooker_core::metrics::ExperimentalSeries;
use cooker_core::presets::{paper_like_environment, paper_like_params, paper_like_solver};
use cooker_core::thermal::{CookerParams, CookerState, Environment};

/// The reference cooker, its environment, a start at ambient, and the solver.
pub struct Fixture {
    pub params: CookerParams,
    pub env: Environment,
    pub initial: CookerState,
    pub solver: SolverConfig,
}

impl Fixture {
    pub fn paper_like() -> Self {
        let env = paper_like_environment();
        Self {
            params: paper_like_params(),
            initial: CookerState::at_ambient(&env),
            env,
            solver: paper_like_solver(),
        }
    }

    /// Fluid temperatures of the model itself every ten minutes.
    pub fn self_measurements(&self) -> ExperimentalSeries {
        let r = integrate(&self.params, &self.env, &self.initial, &self.solver)
            .expect("reference run succeeds");
        let pts = ExperimentalSeries::from_simulation(&r)
            .expect("run has samples")
            .points()
            .iter()
            .copied()
            .filter(|p| (p.time / 60.0).round() as i64 % 10 == 0)
            .collect();
        ExperimentalSeries::new(pts, None).expect("subset stays ordered")
    }
}
