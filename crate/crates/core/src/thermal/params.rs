use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stefan–Boltzmann constant in W/(m²·K⁴), at the precision the cooker model uses.
pub const STEFAN_BOLTZMANN: f64 = 5.669e-8;

/// Mass and specific heat of one lumped node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalMass {
    /// kg
    pub mass: f64,
    /// J/(kg·K)
    pub specific_heat: f64,
}

impl ThermalMass {
    pub const fn new(mass: f64, specific_heat: f64) -> Self {
        Self {
            mass,
            specific_heat,
        }
    }

    /// Heat capacity m·c in J/K.
    #[inline]
    pub fn capacity(&self) -> f64 {
        self.mass * self.specific_heat
    }

    fn validate(&self, path: &str) -> Result<()> {
        positive(&format!("{path}.mass"), self.mass)?;
        positive(&format!("{path}.specific_heat"), self.specific_heat)
    }
}

/// Optical properties of absorber and reflector sheets. All dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpticalProps {
    pub alpha_absorber: f64,
    pub alpha_reflector: f64,
    pub eps_absorber: f64,
    pub eps_reflector: f64,
    /// Specular reflectance of the mirror sheet.
    pub rho_mirror: f64,
    /// Mean number of reflections a ray undergoes inside the concentrator.
    pub mean_reflections: f64,
    /// Optical efficiency of the concentrator.
    pub eta0: f64,
}

impl OpticalProps {
    fn validate(&self, path: &str) -> Result<()> {
        for (name, v) in [
            ("alpha_absorber", self.alpha_absorber),
            ("alpha_reflector", self.alpha_reflector),
            ("eps_absorber", self.eps_absorber),
            ("eps_reflector", self.eps_reflector),
            ("rho_mirror", self.rho_mirror),
            ("eta0", self.eta0),
        ] {
            unit_interval(&format!("{path}.{name}"), v)?;
        }
        non_negative(&format!("{path}.mean_reflections"), self.mean_reflections)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    /// Exposed area of the absorber container, m².
    pub area_absorber: f64,
    /// Aperture (catchment) area of the collector, m².
    pub area_collector: f64,
}

impl Geometry {
    fn validate(&self, path: &str) -> Result<()> {
        positive(&format!("{path}.area_absorber"), self.area_absorber)?;
        positive(&format!("{path}.area_collector"), self.area_collector)
    }
}

/// Convective film coefficients, W/(m²·K).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvectionCoeffs {
    /// Absorber container to ambient air.
    pub h_abs_ambient: f64,
    /// Absorber container to the air enclosed by the reflectors.
    pub h_abs_interior: f64,
    /// Reflector sheets to ambient air.
    pub h_refl_ambient: f64,
    /// Container wall to the fluid it holds.
    pub h_abs_fluid: f64,
}

impl ConvectionCoeffs {
    fn validate(&self, path: &str) -> Result<()> {
        for (name, v) in [
            ("h_abs_ambient", self.h_abs_ambient),
            ("h_abs_interior", self.h_abs_interior),
            ("h_refl_ambient", self.h_refl_ambient),
            ("h_abs_fluid", self.h_abs_fluid),
        ] {
            non_negative(&format!("{path}.{name}"), v)?;
        }
        Ok(())
    }
}

/// Every physical constant of one cooker configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CookerParams {
    pub container: ThermalMass,
    pub reflectors: ThermalMass,
    pub fluid: ThermalMass,
    pub optics: OpticalProps,
    pub geometry: Geometry,
    pub convection: ConvectionCoeffs,
    pub sigma: f64,
}

impl CookerParams {
    /// Checks every field invariant, reporting the first violation by its
    /// dotted path.
    pub fn validate(&self) -> Result<()> {
        self.container.validate("container")?;
        self.reflectors.validate("reflectors")?;
        self.fluid.validate("fluid")?;
        self.optics.validate("optics")?;
        self.geometry.validate("geometry")?;
        self.convection.validate("convection")?;
        positive("sigma", self.sigma)
    }
}

pub(crate) fn finite(path: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(path, format!("must be finite, got {v}")))
    }
}

pub(crate) fn positive(path: &str, v: f64) -> Result<()> {
    finite(path, v)?;
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(path, format!("must be > 0, got {v}")))
    }
}

pub(crate) fn non_negative(path: &str, v: f64) -> Result<()> {
    finite(path, v)?;
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(path, format!("must be >= 0, got {v}")))
    }
}

pub(crate) fn unit_interval(path: &str, v: f64) -> Result<()> {
    finite(path, v)?;
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::invalid(path, format!("must lie in [0, 1], got {v}")))
    }
}
