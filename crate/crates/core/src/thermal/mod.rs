//! Three-node energy balance of a concentrating solar cooker: absorber
//! container, reflector sheets, and the fluid being heated.

mod environment;
mod flux;
mod params;

pub use environment::{Environment, Profile, ReflectedIrradiance, SkyModel};
pub use flux::{
    compute_fluxes, reflected_irradiance, rhs, sky_temperature, CookerState, Derivatives,
    FluxBreakdown,
};
pub use params::{
    ConvectionCoeffs, CookerParams, Geometry, OpticalProps, ThermalMass, STEFAN_BOLTZMANN,
};
