use crate::error::{Error, Result};
use crate::thermal::params::{finite, non_negative, positive};

/// A scalar boundary condition that is either constant or piecewise linear in
/// time. Series are held constant beyond their end points.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(f64),
    /// `(time [s], value)` knots with strictly increasing times.
    PiecewiseLinear(Vec<(f64, f64)>),
}

impl Profile {
    pub fn at(&self, t: f64) -> f64 {
        match self {
            Profile::Constant(v) => *v,
            Profile::PiecewiseLinear(knots) => {
                let (first, last) = (knots[0], knots[knots.len() - 1]);
                if t <= first.0 {
                    return first.1;
                }
                if t >= last.0 {
                    return last.1;
                }
                let i = knots.partition_point(|&(tk, _)| tk <= t);
                let (t0, v0) = knots[i - 1];
                let (t1, v1) = knots[i];
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Sample values, i.e. every knot value (one value for a constant).
    pub fn values(&self) -> Vec<f64> {
        match self {
            Profile::Constant(v) => vec![*v],
            Profile::PiecewiseLinear(k) => k.iter().map(|&(_, v)| v).collect(),
        }
    }

    fn validate(&self, path: &str, check: fn(&str, f64) -> Result<()>) -> Result<()> {
        match self {
            Profile::Constant(v) => check(path, *v),
            Profile::PiecewiseLinear(knots) => {
                if knots.is_empty() {
                    return Err(Error::invalid(path, "series must have at least one point"));
                }
                for (i, &(t, v)) in knots.iter().enumerate() {
                    finite(&format!("{path}[{i}].time"), t)?;
                    check(&format!("{path}[{i}].value"), v)?;
                    if i > 0 && t <= knots[i - 1].0 {
                        return Err(Error::invalid(
                            format!("{path}[{i}].time"),
                            "times must be strictly increasing",
                        ));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Effective radiative temperature of the sky seen by the cooker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SkyModel {
    /// Swinbank clear-sky correlation, `0.0552·T_amb^1.5` with T in kelvin.
    Swinbank,
    /// Sky colder than ambient by a fixed number of kelvin.
    FixedOffset(f64),
    EqualToAmbient,
}

/// How the irradiance reaching the absorber after concentration is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ReflectedIrradiance {
    /// `η0 · ρ_m^n · I_D`.
    #[default]
    Concentrator,
    /// A constant value in W/m², independent of the optics.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    /// Ambient air temperature, K.
    pub t_ambient: Profile,
    /// Direct normal irradiance, W/m².
    pub irradiance_direct: Profile,
    pub sky_model: SkyModel,
    pub reflected: ReflectedIrradiance,
}

impl Environment {
    pub fn constant(t_ambient: f64, irradiance_direct: f64, sky_model: SkyModel) -> Self {
        Self {
            t_ambient: Profile::Constant(t_ambient),
            irradiance_direct: Profile::Constant(irradiance_direct),
            sky_model,
            reflected: ReflectedIrradiance::Concentrator,
        }
    }

    pub fn ambient_at(&self, t: f64) -> f64 {
        self.t_ambient.at(t)
    }

    pub fn irradiance_at(&self, t: f64) -> f64 {
        self.irradiance_direct.at(t)
    }

    pub fn validate(&self) -> Result<()> {
        self.t_ambient.validate("environment.t_ambient", positive)?;
        self.irradiance_direct
            .validate("environment.irradiance_direct", non_negative)?;
        if let SkyModel::FixedOffset(dk) = self.sky_model {
            non_negative("environment.sky_model.fixed_offset", dk)?;
            // The sky has to stay above absolute zero at the coldest ambient.
            let coldest = self
                .t_ambient
                .values()
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if coldest - dk <= 0.0 {
                return Err(Error::invalid(
                    "environment.sky_model.fixed_offset",
                    format!("offset {dk} K puts the sky at or below 0 K"),
                ));
            }
        }
        if let ReflectedIrradiance::Fixed(v) = self.reflected {
            non_negative("environment.reflected_irradiance.fixed", v)?;
        }
        Ok(())
    }
}
