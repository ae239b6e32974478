//! Cooking power, standardized cooking power at ΔT = 50 K, and scoring of a
//! simulation against measured fluid temperatures.

use crate::error::{Error, Result};
use crate::integrator::SimulationResult;
use crate::units::kelvin_to_celsius;

/// Fluid-minus-ambient temperature difference at which the standardized
/// cooking power is reported, K.
pub const STANDARD_DELTA_T: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentalPoint {
    /// s
    pub time: f64,
    /// K
    pub t_fluid: f64,
    /// Measurement uncertainty, K.
    pub uncertainty: Option<f64>,
}

/// Measured fluid temperatures, e.g. from a field test.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentalSeries {
    points: Vec<ExperimentalPoint>,
    /// Ambient temperature during the test, K, when known.
    pub t_ambient_ref: Option<f64>,
}

impl ExperimentalSeries {
    pub fn new(points: Vec<ExperimentalPoint>, t_ambient_ref: Option<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain(format!(
                "an experimental series needs at least 2 points, got {}",
                points.len()
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.time.is_finite() || !(p.t_fluid.is_finite() && p.t_fluid > 0.0) {
                return Err(Error::domain(format!("point {i} has a non-finite or non-positive value")));
            }
            if let Some(u) = p.uncertainty {
                if !(u.is_finite() && u >= 0.0) {
                    return Err(Error::domain(format!("point {i} has a negative uncertainty")));
                }
            }
            if i > 0 && p.time <= points[i - 1].time {
                return Err(Error::domain(format!("point {i}: times must be strictly increasing")));
            }
        }
        Ok(Self {
            points,
            t_ambient_ref,
        })
    }

    pub fn points(&self) -> &[ExperimentalPoint] {
        &self.points
    }

    /// Builds a series from the fluid temperatures of a simulation, one point
    /// per sample.
    pub fn from_simulation(result: &SimulationResult) -> Result<Self> {
        let points = result
            .samples
            .iter()
            .map(|s| ExperimentalPoint {
                time: s.state.time,
                t_fluid: s.state.t_fluid,
                uncertainty: None,
            })
            .collect();
        Self::new(points, result.samples.first().map(|s| s.fluxes.t_ambient))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPoint {
    /// T_f − T_amb, K.
    pub delta_t: f64,
    /// W
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerCurve {
    pub points: Vec<PowerPoint>,
}

impl PowerCurve {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self {
            points: pairs
                .into_iter()
                .map(|(delta_t, power)| PowerPoint { delta_t, power })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StdPowerMethod {
    /// Piecewise-linear interpolation at ΔT = 50 K.
    #[default]
    Interpolate,
    /// Least-squares line through the whole curve, evaluated at ΔT = 50 K.
    LinearRegression,
}

/// Cooking power against ΔT for every sample of a run. The power is the net
/// heat into the fluid, `q8_conv + q9_rad`, which equals `m_f·c_f·dT_f/dt`.
pub fn cooking_power_series(result: &SimulationResult) -> Result<PowerCurve> {
    if result.samples.is_empty() {
        return Err(Error::domain("simulation result has no samples"));
    }
    Ok(PowerCurve::from_pairs(result.samples.iter().map(|s| {
        (s.state.t_fluid - s.fluxes.t_ambient, s.fluxes.fluid_net())
    })))
}

/// Cooking power at ΔT = 50 K.
pub fn standardized_cooking_power(curve: &PowerCurve, method: StdPowerMethod) -> Result<f64> {
    power_at(curve, STANDARD_DELTA_T, method)
}

/// Cooking power at an arbitrary ΔT.
pub fn power_at(curve: &PowerCurve, delta_t: f64, method: StdPowerMethod) -> Result<f64> {
    let pts = &curve.points;
    if pts
        .iter()
        .any(|p| !p.delta_t.is_finite() || !p.power.is_finite())
    {
        return Err(Error::domain("power curve contains non-finite values"));
    }
    match method {
        StdPowerMethod::Interpolate => {
            if let Some(p) = pts.iter().find(|p| p.delta_t == delta_t) {
                return Ok(p.power);
            }
            // First segment whose end points straddle the target.
            for w in pts.windows(2) {
                let (a, b) = (w[0], w[1]);
                let (lo, hi) = if a.delta_t <= b.delta_t { (a, b) } else { (b, a) };
                if lo.delta_t < delta_t && delta_t < hi.delta_t {
                    let s = (delta_t - lo.delta_t) / (hi.delta_t - lo.delta_t);
                    return Ok(lo.power + s * (hi.power - lo.power));
                }
            }
            Err(Error::range(format!(
                "power curve does not bracket ΔT = {delta_t} K"
            )))
        }
        StdPowerMethod::LinearRegression => {
            let n = pts.len() as f64;
            if pts.len() < 2 {
                return Err(Error::domain("regression needs at least 2 points"));
            }
            let mean_x = pts.iter().map(|p| p.delta_t).sum::<f64>() / n;
            let mean_y = pts.iter().map(|p| p.power).sum::<f64>() / n;
            let sxx: f64 = pts.iter().map(|p| (p.delta_t - mean_x).powi(2)).sum();
            let sxy: f64 = pts
                .iter()
                .map(|p| (p.delta_t - mean_x) * (p.power - mean_y))
                .sum();
            if sxx <= 0.0 {
                return Err(Error::domain("regression needs at least 2 distinct ΔT values"));
            }
            let slope = sxy / sxx;
            Ok(mean_y + slope * (delta_t - mean_x))
        }
    }
}

/// Per-point comparison of simulated and measured fluid temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub time: f64,
    pub t_experiment: f64,
    pub t_simulated: f64,
}

impl Residual {
    /// Simulated minus measured, K.
    pub fn difference(&self) -> f64 {
        self.t_simulated - self.t_experiment
    }

    /// Absolute percentage error with both temperatures in °C.
    pub fn percent(&self) -> f64 {
        let exp_c = kelvin_to_celsius(self.t_experiment);
        100.0 * (self.t_simulated - self.t_experiment).abs() / exp_c.abs()
    }
}

/// Simulated fluid temperature at every measurement time.
pub fn residuals(result: &SimulationResult, exp: &ExperimentalSeries) -> Result<Vec<Residual>> {
    exp.points()
        .iter()
        .map(|p| {
            Ok(Residual {
                time: p.time,
                t_experiment: p.t_fluid,
                t_simulated: result.fluid_temperature_at(p.time)?,
            })
        })
        .collect()
}

/// Mean absolute percentage error of the simulated fluid temperature against
/// the measurements, temperatures in °C, in percent.
pub fn relative_error(result: &SimulationResult, exp: &ExperimentalSeries) -> Result<f64> {
    if result.samples.is_empty() {
        return Err(Error::domain("simulation result has no samples"));
    }
    let res = residuals(result, exp)?;
    if res
        .iter()
        .any(|r| kelvin_to_celsius(r.t_experiment) == 0.0)
    {
        return Err(Error::domain("an experimental temperature of 0 °C makes the percentage error undefined"));
    }
    Ok(res.iter().map(Residual::percent).sum::<f64>() / res.len() as f64)
}

/// Relative difference of a simulated standardized power from the measured
/// one, in percent.
pub fn compare_power(sim_std_power: f64, exp_std_power: f64) -> Result<f64> {
    if !(exp_std_power.is_finite() && exp_std_power > 0.0) || !sim_std_power.is_finite() {
        return Err(Error::domain(format!(
            "experimental power must be positive and finite, got {exp_std_power}"
        )));
    }
    Ok(100.0 * (sim_std_power - exp_std_power).abs() / exp_std_power)
}
