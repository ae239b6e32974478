//! Fitting model coefficients to measured fluid temperatures.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::integrator::{integrate, SimulationResult, SolverConfig, Status};
use crate::metrics::{relative_error, ExperimentalSeries};
use crate::thermal::{CookerParams, CookerState, Environment};

/// Objective value assigned to candidates whose simulation fails.
pub const PENALTY: f64 = 1e6;

/// Most parameters a single calibration may fit.
pub const MAX_FREE_PARAMS: usize = 6;

/// A numeric field of [`CookerParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamPath {
    ContainerMass,
    ContainerSpecificHeat,
    ReflectorsMass,
    ReflectorsSpecificHeat,
    FluidMass,
    FluidSpecificHeat,
    AlphaAbsorber,
    AlphaReflector,
    EpsAbsorber,
    EpsReflector,
    RhoMirror,
    MeanReflections,
    Eta0,
    AreaAbsorber,
    AreaCollector,
    HAbsAmbient,
    HAbsInterior,
    HReflAmbient,
    HAbsFluid,
}

impl ParamPath {
    pub const ALL: [ParamPath; 19] = [
        ParamPath::ContainerMass,
        ParamPath::ContainerSpecificHeat,
        ParamPath::ReflectorsMass,
        ParamPath::ReflectorsSpecificHeat,
        ParamPath::FluidMass,
        ParamPath::FluidSpecificHeat,
        ParamPath::AlphaAbsorber,
        ParamPath::AlphaReflector,
        ParamPath::EpsAbsorber,
        ParamPath::EpsReflector,
        ParamPath::RhoMirror,
        ParamPath::MeanReflections,
        ParamPath::Eta0,
        ParamPath::AreaAbsorber,
        ParamPath::AreaCollector,
        ParamPath::HAbsAmbient,
        ParamPath::HAbsInterior,
        ParamPath::HReflAmbient,
        ParamPath::HAbsFluid,
    ];

    /// Dotted path as it appears in a configuration file.
    pub fn name(self) -> &'static str {
        match self {
            ParamPath::ContainerMass => "container.mass",
            ParamPath::ContainerSpecificHeat => "container.specific_heat",
            ParamPath::ReflectorsMass => "reflectors.mass",
            ParamPath::ReflectorsSpecificHeat => "reflectors.specific_heat",
            ParamPath::FluidMass => "fluid.mass",
            ParamPath::FluidSpecificHeat => "fluid.specific_heat",
            ParamPath::AlphaAbsorber => "optics.alpha_absorber",
            ParamPath::AlphaReflector => "optics.alpha_reflector",
            ParamPath::EpsAbsorber => "optics.eps_absorber",
            ParamPath::EpsReflector => "optics.eps_reflector",
            ParamPath::RhoMirror => "optics.rho_mirror",
            ParamPath::MeanReflections => "optics.mean_reflections",
            ParamPath::Eta0 => "optics.eta0",
            ParamPath::AreaAbsorber => "geometry.area_absorber",
            ParamPath::AreaCollector => "geometry.area_collector",
            ParamPath::HAbsAmbient => "convection.h_abs_ambient",
            ParamPath::HAbsInterior => "convection.h_abs_interior",
            ParamPath::HReflAmbient => "convection.h_refl_ambient",
            ParamPath::HAbsFluid => "convection.h_abs_fluid",
        }
    }

    fn slot(self, p: &mut CookerParams) -> &mut f64 {
        match self {
            ParamPath::ContainerMass => &mut p.container.mass,
            ParamPath::ContainerSpecificHeat => &mut p.container.specific_heat,
            ParamPath::ReflectorsMass => &mut p.reflectors.mass,
            ParamPath::ReflectorsSpecificHeat => &mut p.reflectors.specific_heat,
            ParamPath::FluidMass => &mut p.fluid.mass,
            ParamPath::FluidSpecificHeat => &mut p.fluid.specific_heat,
            ParamPath::AlphaAbsorber => &mut p.optics.alpha_absorber,
            ParamPath::AlphaReflector => &mut p.optics.alpha_reflector,
            ParamPath::EpsAbsorber => &mut p.optics.eps_absorber,
            ParamPath::EpsReflector => &mut p.optics.eps_reflector,
            ParamPath::RhoMirror => &mut p.optics.rho_mirror,
            ParamPath::MeanReflections => &mut p.optics.mean_reflections,
            ParamPath::Eta0 => &mut p.optics.eta0,
            ParamPath::AreaAbsorber => &mut p.geometry.area_absorber,
            ParamPath::AreaCollector => &mut p.geometry.area_collector,
            ParamPath::HAbsAmbient => &mut p.convection.h_abs_ambient,
            ParamPath::HAbsInterior => &mut p.convection.h_abs_interior,
            ParamPath::HReflAmbient => &mut p.convection.h_refl_ambient,
            ParamPath::HAbsFluid => &mut p.convection.h_abs_fluid,
        }
    }

    pub fn get(self, p: &CookerParams) -> f64 {
        let mut copy = p.clone();
        *self.slot(&mut copy)
    }

    pub fn set(self, p: &mut CookerParams, value: f64) {
        *self.slot(p) = value;
    }
}

impl fmt::Display for ParamPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamPath {
    type Err = Error;

    /// Accepts the full dotted path or, when unambiguous, just the field name
    /// (`h_abs_fluid`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(p) = Self::ALL.iter().find(|p| p.name() == s) {
            return Ok(*p);
        }
        let by_leaf: Vec<_> = Self::ALL
            .iter()
            .filter(|p| p.name().rsplit('.').next() == Some(s))
            .collect();
        match by_leaf.as_slice() {
            [one] => Ok(**one),
            [] => Err(Error::domain(format!("unknown parameter `{s}`"))),
            many => Err(Error::domain(format!(
                "parameter `{s}` is ambiguous, use one of: {}",
                many.iter().map(|p| p.name()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }
}

/// A parameter together with the box it may move in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub param: ParamPath,
    pub lower: f64,
    pub upper: f64,
}

impl ParamSpec {
    pub fn new(param: ParamPath, lower: f64, upper: f64) -> Result<Self> {
        let spec = Self { param, lower, upper };
        spec.check_bounds()?;
        Ok(spec)
    }

    fn check_bounds(&self) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower < self.upper) {
            return Err(Error::domain(format!(
                "{}: bounds must be finite with lower < upper, got [{}, {}]",
                self.param, self.lower, self.upper
            )));
        }
        Ok(())
    }

    /// Both bounds must give valid parameters when substituted into `base`.
    pub(crate) fn check_feasible(&self, base: &CookerParams) -> Result<()> {
        self.check_bounds()?;
        for v in [self.lower, self.upper] {
            let mut p = base.clone();
            self.param.set(&mut p, v);
            p.validate().map_err(|e| {
                Error::domain(format!("{}: bound {v} is not a valid value ({e})", self.param))
            })?;
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Convergence threshold on the simplex diameter, as a fraction of the
    /// box width along each axis.
    pub tolerance: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best objective value after each iteration.
    pub history: Vec<f64>,
}

/// Maps a coordinate onto [0, 1] by mirroring at the faces.
fn fold_unit(u: f64) -> f64 {
    if !u.is_finite() {
        return 0.5;
    }
    let m = u.rem_euclid(2.0);
    if m > 1.0 {
        2.0 - m
    } else {
        m
    }
}

/// Nelder–Mead simplex search inside the box `[lower, upper]`.
///
/// The search runs on box-normalized coordinates. The initial simplex is the
/// box center plus one vertex displaced by a quarter of the box width along
/// each axis. Trial points outside the box are mirrored back in.
pub fn nelder_mead<F>(mut f: F, lower: &[f64], upper: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = lower.len();
    assert_eq!(n, upper.len());
    assert!(n > 0);
    let to_x = |u: &[f64]| -> Vec<f64> {
        u.iter()
            .enumerate()
            .map(|(i, &ui)| lower[i] + ui * (upper[i] - lower[i]))
            .collect()
    };
    let mut evaluations = 0usize;
    let mut eval = |u: &[f64]| {
        evaluations += 1;
        let v = f(&to_x(u));
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(vec![0.5; n]);
    for i in 0..n {
        let mut v = vec![0.5; n];
        v[i] += 0.25;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v)).collect();

    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    loop {
        // Sort vertices best-first; stable on ties for determinism.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < opts.tolerance {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| fold_unit(c + t * (c - w)))
                .collect()
        };

        let reflected = along(1.0);
        let f_r = eval(&reflected);
        if f_r < values[0] {
            let expanded = along(2.0);
            let f_e = eval(&expanded);
            if f_e < f_r {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
        } else if f_r < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_r;
        } else {
            let (contracted, f_c) = if f_r < values[n] {
                let c = along(0.5);
                let fc = eval(&c);
                (c, fc)
            } else {
                let c = along(-0.5);
                let fc = eval(&c);
                (c, fc)
            };
            if f_c < values[n].min(f_r) {
                simplex[n] = contracted;
                values[n] = f_c;
            } else {
                let best = simplex[0].clone();
                for k in 1..=n {
                    simplex[k] = simplex[k]
                        .iter()
                        .zip(&best)
                        .map(|(v, b)| b + 0.5 * (v - b))
                        .collect();
                    values[k] = eval(&simplex[k]);
                }
            }
        }
        history.push(values.iter().copied().fold(f64::INFINITY, f64::min));
    }

    Minimum {
        x: to_x(&simplex[0]),
        value: values[0],
        iterations,
        evaluations,
        converged,
        history,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub params: CookerParams,
    /// Relative error of the fitted model, percent.
    pub error: f64,
    pub search: Minimum,
}

/// Relative error of `params` against `exp`, or [`PENALTY`] when the run
/// fails or does not cover every measurement.
pub fn objective(
    params: &CookerParams,
    env: &Environment,
    initial: &CookerState,
    cfg: &SolverConfig,
    exp: &ExperimentalSeries,
) -> f64 {
    let run = match integrate(params, env, initial, cfg) {
        Ok(r) => r,
        Err(_) => return PENALTY,
    };
    score(&run, exp)
}

fn score(run: &SimulationResult, exp: &ExperimentalSeries) -> f64 {
    if matches!(run.status, Status::StepFailure(_)) {
        return PENALTY;
    }
    match relative_error(run, exp) {
        Ok(e) if e.is_finite() => e,
        _ => PENALTY,
    }
}

/// Fits the `free` parameters of `base` to the measured fluid temperatures
/// by minimizing the relative error.
pub fn calibrate(
    base: &CookerParams,
    env: &Environment,
    initial: &CookerState,
    cfg: &SolverConfig,
    free: &[ParamSpec],
    exp: &ExperimentalSeries,
) -> Result<Calibration> {
    calibrate_with(base, env, initial, cfg, free, exp, &NelderMeadOptions::default())
}

pub fn calibrate_with(
    base: &CookerParams,
    env: &Environment,
    initial: &CookerState,
    cfg: &SolverConfig,
    free: &[ParamSpec],
    exp: &ExperimentalSeries,
    opts: &NelderMeadOptions,
) -> Result<Calibration> {
    if free.is_empty() || free.len() > MAX_FREE_PARAMS {
        return Err(Error::domain(format!(
            "between 1 and {MAX_FREE_PARAMS} free parameters are required, got {}",
            free.len()
        )));
    }
    for (i, s) in free.iter().enumerate() {
        if free[..i].iter().any(|o| o.param == s.param) {
            return Err(Error::domain(format!("{} is listed twice", s.param)));
        }
        s.check_feasible(base)?;
    }
    base.validate()?;
    env.validate()?;
    cfg.validate()?;
    initial.validate()?;

    let with = |x: &[f64]| {
        let mut p = base.clone();
        for (s, &v) in free.iter().zip(x) {
            s.param.set(&mut p, v);
        }
        p
    };
    let lower: Vec<f64> = free.iter().map(|s| s.lower).collect();
    let upper: Vec<f64> = free.iter().map(|s| s.upper).collect();
    let search = nelder_mead(
        |x| objective(&with(x), env, initial, cfg, exp),
        &lower,
        &upper,
        opts,
    );
    Ok(Calibration {
        params: with(&search.x),
        error: search.value,
        search,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_mirrors_into_unit_interval() {
        assert_eq!(fold_unit(0.3), 0.3);
        assert_eq!(fold_unit(-0.25), 0.25);
        assert_eq!(fold_unit(1.25), 0.75);
        assert_eq!(fold_unit(2.5), 0.5);
        assert_eq!(fold_unit(f64::INFINITY), 0.5);
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let m = nelder_mead(
            |x| (x[0] - 1.3).powi(2) + 3.0 * (x[1] + 0.4).powi(2),
            &[-2.0, -2.0],
            &[2.0, 2.0],
            &NelderMeadOptions::default(),
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.3).abs() < 1e-3, "{:?}", m.x);
        assert!((m.x[1] + 0.4).abs() < 1e-3, "{:?}", m.x);
    }

    #[test]
    fn nelder_mead_respects_box_and_history_is_monotone() {
        // Unconstrained minimum at 5 lies outside [0, 1].
        let m = nelder_mead(|x| (x[0] - 5.0).powi(2), &[0.0], &[1.0], &NelderMeadOptions::default());
        assert!(m.x[0] <= 1.0 && m.x[0] > 0.999, "{:?}", m.x);
        assert!(m.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn nelder_mead_stops_at_iteration_cap() {
        let opts = NelderMeadOptions {
            max_iterations: 3,
            tolerance: 1e-12,
        };
        let m = nelder_mead(|x| x[0].powi(2) + x[1].powi(2), &[-1.0, -1.0], &[3.0, 3.0], &opts);
        assert_eq!(m.iterations, 3);
        assert!(!m.converged);
    }

    #[test]
    fn param_path_parsing() {
        assert_eq!("convection.h_abs_fluid".parse::<ParamPath>().unwrap(), ParamPath::HAbsFluid);
        assert_eq!("h_abs_fluid".parse::<ParamPath>().unwrap(), ParamPath::HAbsFluid);
        assert_eq!("area_collector".parse::<ParamPath>().unwrap(), ParamPath::AreaCollector);
        assert!("mass".parse::<ParamPath>().unwrap_err().to_string().contains("ambiguous"));
        assert!("sigma".parse::<ParamPath>().is_err());
        for p in ParamPath::ALL {
            assert_eq!(p.name().parse::<ParamPath>().unwrap(), p);
        }
    }

    #[test]
    fn param_spec_rejects_inverted_bounds() {
        assert!(ParamSpec::new(ParamPath::HAbsFluid, 2.0, 1.0).is_err());
        assert!(ParamSpec::new(ParamPath::HAbsFluid, 1.0, 1.0).is_err());
        assert!(ParamSpec::new(ParamPath::HAbsFluid, f64::NAN, 1.0).is_err());
    }
}
