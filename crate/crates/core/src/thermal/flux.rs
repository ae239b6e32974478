use crate::error::{Error, Result};
use crate::thermal::environment::{Environment, ReflectedIrradiance, SkyModel};
use crate::thermal::params::{CookerParams, OpticalProps};
use crate::units::celsius_to_kelvin;

/// Temperatures of the three lumped nodes at one instant. Time in s,
/// temperatures in K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CookerState {
    pub time: f64,
    /// Absorber container.
    pub t_container: f64,
    /// Reflector sheets.
    pub t_reflector: f64,
    pub t_fluid: f64,
}

impl CookerState {
    pub fn new(time: f64, t_container: f64, t_reflector: f64, t_fluid: f64) -> Self {
        Self {
            time,
            t_container,
            t_reflector,
            t_fluid,
        }
    }

    pub fn from_celsius(time: f64, container: f64, reflector: f64, fluid: f64) -> Self {
        Self::new(
            time,
            celsius_to_kelvin(container),
            celsius_to_kelvin(reflector),
            celsius_to_kelvin(fluid),
        )
    }

    /// All three nodes at the ambient temperature at `t = 0`.
    pub fn at_ambient(env: &Environment) -> Self {
        let t = env.ambient_at(0.0);
        Self::new(0.0, t, t, t)
    }

    pub(crate) fn from_array(time: f64, y: &[f64; 3]) -> Self {
        Self::new(time, y[0], y[1], y[2])
    }

    pub(crate) fn temperatures(&self) -> [f64; 3] {
        [self.t_container, self.t_reflector, self.t_fluid]
    }

    pub fn validate(&self) -> Result<()> {
        if !self.time.is_finite() {
            return Err(Error::domain(format!("state time {} is not finite", self.time)));
        }
        for (name, t) in [
            ("t_container", self.t_container),
            ("t_reflector", self.t_reflector),
            ("t_fluid", self.t_fluid),
        ] {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::domain(format!("{name} = {t} K is not a positive finite temperature")));
            }
        }
        Ok(())
    }
}

/// Every heat flow of the model at one instant, in W, together with the
/// intermediate temperatures used to compute them.
///
/// Signs follow the energy balances: `q1`, `q5` are gains; `q2`, `q3`, `q3_conv2`,
/// `q4`, `q6`, `q7` are losses of their emitting node; `q8_conv` and `q9_rad`
/// are what the fluid receives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FluxBreakdown {
    /// Direct plus concentrated irradiance absorbed by the container.
    pub q1_rad: f64,
    /// Container to sky.
    pub q2_rad: f64,
    /// Container to ambient air.
    pub q3_conv: f64,
    /// Container to the air inside the concentrator.
    pub q3_conv2: f64,
    /// Container to reflectors.
    pub q4_rad: f64,
    /// Direct irradiance absorbed by the reflectors.
    pub q5_rad: f64,
    /// Reflectors to ambient air.
    pub q6_conv: f64,
    /// Reflectors to sky.
    pub q7_rad: f64,
    /// Convective exchange between container wall and fluid.
    pub q8_conv: f64,
    /// Container to fluid.
    pub q9_rad: f64,
    /// Air temperature inside the concentrator, mean of container and reflectors.
    pub t_int2: f64,
    /// Mean of container and fluid.
    pub t_inte: f64,
    /// W/m².
    pub irradiance_reflected: f64,
    pub t_sky: f64,
    pub t_ambient: f64,
}

impl FluxBreakdown {
    /// Net heat into the container, W.
    pub fn container_net(&self) -> f64 {
        self.q1_rad
            - self.q2_rad
            - self.q3_conv
            - self.q4_rad
            - self.q8_conv
            - self.q9_rad
            - self.q3_conv2
    }

    /// Net heat into the reflector sheets, W.
    pub fn reflector_net(&self) -> f64 {
        self.q5_rad + self.q4_rad - self.q6_conv - self.q7_rad + self.q3_conv2
    }

    /// Net heat into the fluid, W. This is the cooking power.
    pub fn fluid_net(&self) -> f64 {
        self.q8_conv + self.q9_rad
    }

    fn check_finite(&self) -> Result<()> {
        let all = [
            self.q1_rad,
            self.q2_rad,
            self.q3_conv,
            self.q3_conv2,
            self.q4_rad,
            self.q5_rad,
            self.q6_conv,
            self.q7_rad,
            self.q8_conv,
            self.q9_rad,
            self.t_int2,
            self.t_inte,
            self.irradiance_reflected,
            self.t_sky,
        ];
        if all.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::domain("flux evaluation produced a non-finite value"))
        }
    }
}

/// Effective sky temperature in K for an ambient temperature in K.
pub fn sky_temperature(t_ambient: f64, model: SkyModel) -> Result<f64> {
    if !(t_ambient.is_finite() && t_ambient > 0.0) {
        return Err(Error::domain(format!(
            "ambient temperature must be positive and finite, got {t_ambient} K"
        )));
    }
    let t_sky = match model {
        SkyModel::Swinbank => 0.0552 * t_ambient.powf(1.5),
        SkyModel::FixedOffset(dk) => t_ambient - dk,
        SkyModel::EqualToAmbient => t_ambient,
    };
    Ok(t_sky)
}

/// Irradiance delivered onto the absorber by the concentrator, `η0 · ρ_m^n · I_D`.
pub fn reflected_irradiance(i_direct: f64, optics: &OpticalProps) -> f64 {
    optics.eta0 * optics.rho_mirror.powf(optics.mean_reflections) * i_direct
}

/// Evaluates every heat flow for `state`, with the environment sampled at
/// `state.time`. Radiative terms use absolute temperatures.
pub fn compute_fluxes(
    state: &CookerState,
    params: &CookerParams,
    env: &Environment,
) -> Result<FluxBreakdown> {
    let t_r = state.t_container;
    let t_rf = state.t_reflector;
    let t_f = state.t_fluid;
    if ![state.time, t_r, t_rf, t_f].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("state contains a non-finite value"));
    }

    let t_amb = env.ambient_at(state.time);
    let i_d = env.irradiance_at(state.time);
    if !i_d.is_finite() {
        return Err(Error::domain(format!("direct irradiance {i_d} is not finite")));
    }
    let t_sky = sky_temperature(t_amb, env.sky_model)?;
    let i_r = match env.reflected {
        ReflectedIrradiance::Concentrator => reflected_irradiance(i_d, &params.optics),
        ReflectedIrradiance::Fixed(v) => v,
    };

    let a_r = params.geometry.area_absorber;
    let a_rf = params.geometry.area_collector;
    let o = &params.optics;
    let h = &params.convection;
    let sigma = params.sigma;

    let t_int2 = 0.5 * (t_r + t_rf);
    let t_inte = 0.5 * (t_r + t_f);
    let t_r4 = t_r.powi(4);
    let t_sky4 = t_sky.powi(4);

    let fluxes = FluxBreakdown {
        q1_rad: a_r * o.alpha_absorber * i_d + a_rf * i_r,
        q2_rad: a_r * o.eps_absorber * sigma * (t_r4 - t_sky4),
        q3_conv: a_r * h.h_abs_ambient * (t_r - t_amb),
        q3_conv2: a_r * h.h_abs_interior * (t_r - t_int2),
        q4_rad: a_r * o.eps_absorber * sigma * (t_r4 - t_rf.powi(4)),
        q5_rad: a_rf * o.alpha_reflector * i_d,
        q6_conv: a_rf * h.h_refl_ambient * (t_rf - t_amb),
        q7_rad: a_rf * o.eps_reflector * sigma * (t_rf.powi(4) - t_sky4),
        // Sign as in the original balance: (T_inte − T_r) = (T_f − T_r)/2.
        q8_conv: a_r * h.h_abs_fluid * (t_inte - t_r),
        q9_rad: a_r * o.eps_absorber * sigma * (t_r4 - t_f.powi(4)),
        t_int2,
        t_inte,
        irradiance_reflected: i_r,
        t_sky,
        t_ambient: t_amb,
    };
    fluxes.check_finite()?;
    Ok(fluxes)
}

/// Time derivatives of the three node temperatures, K/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub d_container: f64,
    pub d_reflector: f64,
    pub d_fluid: f64,
}

impl Derivatives {
    pub fn from_fluxes(f: &FluxBreakdown, params: &CookerParams) -> Self {
        Self {
            d_container: f.container_net() / params.container.capacity(),
            d_reflector: f.reflector_net() / params.reflectors.capacity(),
            d_fluid: f.fluid_net() / params.fluid.capacity(),
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.d_container, self.d_reflector, self.d_fluid]
    }
}

/// Right-hand side of the coupled three-node energy balance.
pub fn rhs(state: &CookerState, params: &CookerParams, env: &Environment) -> Result<Derivatives> {
    let f = compute_fluxes(state, params, env)?;
    Ok(Derivatives::from_fluxes(&f, params))
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::thermal::params::{ConvectionCoeffs, Geometry, ThermalMass, STEFAN_BOLTZMANN};

    fn params() -> CookerParams {
        CookerParams {
            container: ThermalMass::new(2.2, 900.0),
            reflectors: ThermalMass::new(3.0, 900.0),
            fluid: ThermalMass::new(4.2, 4186.0),
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
                area_absorber: 0.05,
                area_collector: 1.0,
            },
            convection: ConvectionCoeffs {
                h_abs_ambient: 10.0,
                h_abs_interior: 3.0,
                h_refl_ambient: 8.0,
                h_abs_fluid: 2.0,
            },
            sigma: STEFAN_BOLTZMANN,
        }
    }

    #[test]
    fn sky_models() {
        assert_relative_eq!(
            sky_temperature(300.0, SkyModel::Swinbank).unwrap(),
            0.0552 * 5196.152422706632,
            max_relative = 1e-14
        );
        assert!((sky_temperature(300.0, SkyModel::Swinbank).unwrap() - 286.83).abs() < 5e-3);
        assert_eq!(sky_temperature(295.0, SkyModel::EqualToAmbient).unwrap(), 295.0);
        assert_eq!(sky_temperature(300.0, SkyModel::FixedOffset(0.0)).unwrap(), 300.0);
        assert_eq!(sky_temperature(300.0, SkyModel::FixedOffset(20.0)).unwrap(), 280.0);
        assert!(matches!(
            sky_temperature(0.0, SkyModel::Swinbank),
            Err(Error::Domain(_))
        ));
        assert!(sky_temperature(-3.0, SkyModel::EqualToAmbient).is_err());
        assert!(sky_temperature(f64::NAN, SkyModel::EqualToAmbient).is_err());
    }

    #[test]
    fn reflected_irradiance_examples() {
        let mut o = params().optics;
        o.eta0 = 1.0;
        o.rho_mirror = 1.0;
        o.mean_reflections = 3.0;
        assert_eq!(reflected_irradiance(1000.0, &o), 1000.0);
        assert_eq!(reflected_irradiance(0.0, &params().optics), 0.0);
        assert_relative_eq!(
            reflected_irradiance(1000.0, &params().optics),
            765.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn equilibrium_gives_zero_flux() {
        let env = Environment::constant(300.0, 0.0, SkyModel::EqualToAmbient);
        let s = CookerState::new(0.0, 300.0, 300.0, 300.0);
        let f = compute_fluxes(&s, &params(), &env).unwrap();
        for q in [
            f.q1_rad, f.q2_rad, f.q3_conv, f.q3_conv2, f.q4_rad, f.q5_rad, f.q6_conv, f.q7_rad,
            f.q8_conv, f.q9_rad,
        ] {
            assert_eq!(q, 0.0);
        }
        let d = rhs(&s, &params(), &env).unwrap();
        assert_eq!(d.as_array(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn sky_loss_example() {
        let env = Environment::constant(300.0, 0.0, SkyModel::Swinbank);
        let s = CookerState::new(0.0, 350.0, 300.0, 300.0);
        let f = compute_fluxes(&s, &params(), &env).unwrap();
        let t_sky: f64 = 0.0552 * 300f64.powf(1.5);
        let expected = 5.669e-8 * 0.5 * 0.05 * (350f64.powi(4) - t_sky.powi(4));
        assert_relative_eq!(f.q2_rad, expected, max_relative = 1e-12);
        assert!((f.q2_rad - 11.67).abs() < 0.01, "{}", f.q2_rad);
    }

    #[test]
    fn ambient_convection_example() {
        let env = Environment::constant(300.0, 0.0, SkyModel::Swinbank);
        let s = CookerState::new(0.0, 350.0, 300.0, 300.0);
        let f = compute_fluxes(&s, &params(), &env).unwrap();
        assert_relative_eq!(f.q3_conv, 25.0, max_relative = 1e-12);
        assert_eq!(f.t_int2, 325.0);
        assert_eq!(f.t_inte, 325.0);
        // Half-strength, printed sign: fluid colder than container gives q8 < 0.
        assert_relative_eq!(f.q8_conv, 0.05 * 2.0 * -25.0, max_relative = 1e-12);
    }

    #[test]
    fn fluid_derivative_example() {
        let f = FluxBreakdown {
            q8_conv: 30.0,
            q9_rad: 20.0,
            ..Default::default()
        };
        let d = Derivatives::from_fluxes(&f, &params());
        assert_relative_eq!(d.d_fluid, 50.0 / 17581.2, max_relative = 1e-12);
        assert!((d.d_fluid - 2.844e-3).abs() < 1e-6);
    }

    #[test]
    fn strong_sun_heats_the_container() {
        let env = Environment::constant(300.0, 1000.0, SkyModel::Swinbank);
        let s = CookerState::new(0.0, 330.0, 310.0, 300.0);
        let f = compute_fluxes(&s, &params(), &env).unwrap();
        assert!(f.q1_rad > 700.0);
        assert!(rhs(&s, &params(), &env).unwrap().d_container > 0.0);
    }

    #[test]
    fn non_finite_inputs_are_domain_errors() {
        let env = Environment::constant(300.0, 0.0, SkyModel::Swinbank);
        let s = CookerState::new(0.0, f64::NAN, 300.0, 300.0);
        assert!(matches!(compute_fluxes(&s, &params(), &env), Err(Error::Domain(_))));
        let s = CookerState::new(0.0, 300.0, f64::INFINITY, 300.0);
        assert!(compute_fluxes(&s, &params(), &env).is_err());
        let env = Environment::constant(300.0, f64::NAN, SkyModel::Swinbank);
        let s = CookerState::new(0.0, 300.0, 300.0, 300.0);
        assert!(compute_fluxes(&s, &params(), &env).is_err());
    }

    #[test]
    fn fixed_reflected_irradiance_overrides_optics() {
        let mut env = Environment::constant(300.0, 1000.0, SkyModel::Swinbank);
        env.reflected = ReflectedIrradiance::Fixed(123.0);
        let s = CookerState::new(0.0, 300.0, 300.0, 300.0);
        let f = compute_fluxes(&s, &params(), &env).unwrap();
        assert_eq!(f.irradiance_reflected, 123.0);
        assert_relative_eq!(f.q1_rad, 0.05 * 0.9 * 1000.0 + 123.0, max_relative = 1e-14);
    }
}
