//! Illustrative parameter set resembling a 4.2 kg water load in a 2.2 kg
//! aluminum pressure pot under about 950 W/m² of direct sun.
//!
//! Optical and convective values are plausible engineering guesses and the
//! specific heats are standard table values (aluminum 900, water 4186
//! J/(kg·K)). None of them are measured data for any particular cooker.

use crate::integrator::SolverConfig;
use crate::thermal::{
    ConvectionCoeffs, CookerParams, Environment, Geometry, OpticalProps, SkyModel, ThermalMass,
    STEFAN_BOLTZMANN,
};
use crate::units::celsius_to_kelvin;

pub const ALUMINUM_SPECIFIC_HEAT: f64 = 900.0;
pub const WATER_SPECIFIC_HEAT: f64 = 4186.0;

pub fn paper_like_params() -> CookerParams {
    CookerParams {
        container: ThermalMass::new(2.2, ALUMINUM_SPECIFIC_HEAT),
        reflectors: ThermalMass::new(3.0, ALUMINUM_SPECIFIC_HEAT),
        fluid: ThermalMass::new(4.2, WATER_SPECIFIC_HEAT),
        optics: OpticalProps {
            alpha_absorber: 0.9,
            alpha_reflector: 0.1,
            eps_absorber: 0.5,
            eps_reflector: 0.1,
            rho_mirror: 0.85,
            mean_reflections: 1.0,
            eta0: 0.9,
        },
        geometry: Geometry {
            area_absorber: 0.2,
            area_collector: 1.08,
        },
        convection: ConvectionCoeffs {
            h_abs_ambient: 15.0,
            h_abs_interior: 3.0,
            h_refl_ambient: 8.0,
            h_abs_fluid: 2.0,
        },
        sigma: STEFAN_BOLTZMANN,
    }
}

/// 30 °C ambient, 950 W/m² direct irradiance, Swinbank sky.
pub fn paper_like_environment() -> Environment {
    Environment::constant(celsius_to_kelvin(30.0), 950.0, SkyModel::Swinbank)
}

/// Default solver with the boiling point of water at roughly 1900 m.
pub fn paper_like_solver() -> SolverConfig {
    SolverConfig {
        boiling_point: celsius_to_kelvin(93.0),
        ..SolverConfig::default()
    }
}
