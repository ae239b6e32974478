//! Simulator for a concentrating solar cooker modeled as three lumped
//! thermal nodes (absorber container, reflector sheets, fluid).
//!
//! The crate integrates the coupled energy balance, derives cooking power and
//! the standardized cooking power at ΔT = 50 K, scores runs against measured
//! fluid temperatures, and fits or sweeps model coefficients.
//!
//! ```
//! use cooker_core::prelude::*;
//!
//! let env = Environment::constant(298.15, 0.0, SkyModel::EqualToAmbient);
//! let params = cooker_core::presets::paper_like_params();
//! let initial = CookerState::at_ambient(&env);
//! let run = integrate(&params, &env, &initial, &SolverConfig::default()).unwrap();
//! assert_eq!(run.last().state.t_fluid, 298.15);
//! ```

pub mod calibration;
pub mod error;
pub mod integrator;
pub mod io;
pub mod metrics;
pub mod presets;
pub mod sweep;
pub mod thermal;
pub mod units;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::calibration::{calibrate, ParamPath, ParamSpec};
    pub use crate::error::{Error, Result};
    pub use crate::integrator::{integrate, integrate_fixed_step, SimulationResult, SolverConfig, Status};
    pub use crate::metrics::{
        compare_power, cooking_power_series, relative_error, standardized_cooking_power,
        ExperimentalSeries, PowerCurve, StdPowerMethod,
    };
    pub use crate::sweep::{sweep, GridAxis, SweepResult};
    pub use crate::thermal::{
        CookerParams, CookerState, Environment, FluxBreakdown, SkyModel,
    };
}
