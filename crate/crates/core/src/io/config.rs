//! JSON run configuration.
//!
//! Temperatures are given in °C and times in minutes; field names carry the
//! unit where it differs from SI. Unknown fields are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::SolverConfig;
use crate::thermal::{
    ConvectionCoeffs, CookerParams, CookerState, Environment, Geometry, OpticalProps, Profile,
    ReflectedIrradiance, SkyModel, ThermalMass, STEFAN_BOLTZMANN,
};
use crate::units::{celsius_to_kelvin, kelvin_to_celsius, minutes_to_seconds, seconds_to_minutes};

fn default_sigma() -> f64 {
    STEFAN_BOLTZMANN
}

/// A complete simulation setup as read from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub container: ThermalMass,
    pub reflectors: ThermalMass,
    pub fluid: ThermalMass,
    pub optics: OpticalProps,
    pub geometry: Geometry,
    pub convection: ConvectionCoeffs,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    pub environment: EnvironmentConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub initial: InitialSection,
}

/// Constant value, or `[[minutes, value], ...]` knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileConfig {
    Constant(f64),
    Series(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SkyModelConfig {
    #[default]
    Swinbank,
    EqualToAmbient,
    /// Kelvin below ambient.
    FixedOffset(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ReflectedConfig {
    #[default]
    Concentrator,
    /// W/m²
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    /// °C
    pub t_ambient_c: ProfileConfig,
    /// W/m²
    pub irradiance_direct: ProfileConfig,
    #[serde(default)]
    pub sky_model: SkyModelConfig,
    #[serde(default)]
    pub reflected_irradiance: ReflectedConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub rel_tol: f64,
    pub abs_tol_k: f64,
    pub h_init_s: f64,
    pub h_max_s: f64,
    pub t_end_min: f64,
    pub boiling_point_c: f64,
    pub output_interval_min: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self::from_solver(&SolverConfig::default())
    }
}

impl SolverSection {
    fn from_solver(s: &SolverConfig) -> Self {
        Self {
            rel_tol: s.rel_tol,
            abs_tol_k: s.abs_tol,
            h_init_s: s.h_init,
            h_max_s: s.h_max,
            t_end_min: seconds_to_minutes(s.t_end),
            boiling_point_c: kelvin_to_celsius(s.boiling_point),
            output_interval_min: seconds_to_minutes(s.output_interval),
        }
    }

    fn to_solver(self) -> SolverConfig {
        SolverConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol_k,
            h_init: self.h_init_s,
            h_max: self.h_max_s,
            t_end: minutes_to_seconds(self.t_end_min),
            boiling_point: celsius_to_kelvin(self.boiling_point_c),
            output_interval: minutes_to_seconds(self.output_interval_min),
        }
    }
}

/// Initial node temperatures in °C. Omitted values start at ambient.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_container_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_reflector_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_fluid_c: Option<f64>,
}

/// Validated, SI-unit objects built from a [`RunConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: CookerParams,
    pub env: Environment,
    pub solver: SolverConfig,
    pub initial: CookerState,
}

impl ProfileConfig {
    fn to_profile(&self, convert: fn(f64) -> f64) -> Profile {
        match self {
            ProfileConfig::Constant(v) => Profile::Constant(convert(*v)),
            ProfileConfig::Series(knots) => Profile::PiecewiseLinear(
                knots
                    .iter()
                    .map(|&[t, v]| (minutes_to_seconds(t), convert(v)))
                    .collect(),
            ),
        }
    }
}

/// Rewrites a model-level field path into the name used in the file.
fn config_path(path: &str) -> String {
    const RENAMES: [(&str, &str); 7] = [
        ("environment.t_ambient", "environment.t_ambient_c"),
        ("solver.abs_tol", "solver.abs_tol_k"),
        ("solver.h_init", "solver.h_init_s"),
        ("solver.h_max", "solver.h_max_s"),
        ("solver.t_end", "solver.t_end_min"),
        ("solver.boiling_point", "solver.boiling_point_c"),
        ("solver.output_interval", "solver.output_interval_min"),
    ];
    for (from, to) in RENAMES {
        if let Some(rest) = path.strip_prefix(from) {
            if rest.is_empty() || rest.starts_with('[') || rest.starts_with('.') {
                return format!("{to}{rest}");
            }
        }
    }
    path.to_string()
}

fn in_config_terms(e: Error) -> Error {
    match e {
        Error::Invalid { path, message } => Error::Invalid {
            path: config_path(&path),
            message,
        },
        other => other,
    }
}

impl RunConfig {
    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_slice(bytes);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::Parse {
                line: inner.line(),
                column: inner.column(),
                path,
                message: inner.to_string(),
            }
        })?;
        Ok(cfg)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_slice(s.as_bytes())
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes to JSON")
    }

    /// Converts to SI and checks every invariant, reporting the first
    /// violation by field path.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let params = CookerParams {
            container: self.container,
            reflectors: self.reflectors,
            fluid: self.fluid,
            optics: self.optics,
            geometry: self.geometry,
            convection: self.convection,
            sigma: self.sigma,
        };
        params.validate()?;

        let env = Environment {
            t_ambient: self.environment.t_ambient_c.to_profile(celsius_to_kelvin),
            irradiance_direct: self.environment.irradiance_direct.to_profile(|v| v),
            sky_model: match self.environment.sky_model {
                SkyModelConfig::Swinbank => SkyModel::Swinbank,
                SkyModelConfig::EqualToAmbient => SkyModel::EqualToAmbient,
                SkyModelConfig::FixedOffset(dk) => SkyModel::FixedOffset(dk),
            },
            reflected: match self.environment.reflected_irradiance {
                ReflectedConfig::Concentrator => ReflectedIrradiance::Concentrator,
                ReflectedConfig::Fixed(v) => ReflectedIrradiance::Fixed(v),
            },
        };
        env.validate().map_err(in_config_terms)?;

        let solver = self.solver.to_solver();
        solver.validate().map_err(in_config_terms)?;

        let ambient0 = env.ambient_at(0.0);
        let mut temps = [ambient0; 3];
        for (slot, (name, value)) in temps.iter_mut().zip([
            ("initial.t_container_c", self.initial.t_container_c),
            ("initial.t_reflector_c", self.initial.t_reflector_c),
            ("initial.t_fluid_c", self.initial.t_fluid_c),
        ]) {
            if let Some(c) = value {
                let k = celsius_to_kelvin(c);
                if !(c.is_finite() && k > 0.0) {
                    return Err(Error::invalid(name, format!("must be above -273.15 °C, got {c}")));
                }
                *slot = k;
            }
        }
        let initial = CookerState::new(0.0, temps[0], temps[1], temps[2]);

        Ok(Scenario {
            params,
            env,
            solver,
            initial,
        })
    }

    /// Copy of this configuration with the cooker parameters replaced.
    pub fn with_params(&self, p: &CookerParams) -> Self {
        Self {
            container: p.container,
            reflectors: p.reflectors,
            fluid: p.fluid,
            optics: p.optics,
            geometry: p.geometry,
            convection: p.convection,
            sigma: p.sigma,
            ..self.clone()
        }
    }
}

pub fn load_run_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    RunConfig::from_slice(&bytes)
}

/// Reads and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<Scenario> {
    load_run_config(path)?.to_scenario()
}
