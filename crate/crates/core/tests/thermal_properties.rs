//! Algebraic properties of the flux model over randomized inputs.

use cooker_core::presets::paper_like_params;
use cooker_core::thermal::{
    compute_fluxes, rhs, CookerParams, CookerState, Environment, FluxBreakdown, SkyModel,
};
use cooker_core::units::celsius_to_kelvin;
use proptest::prelude::*;

fn fluxes(s: &CookerState, p: &CookerParams, env: &Environment) -> FluxBreakdown {
    compute_fluxes(s, p, env).unwrap()
}

fn temp() -> impl Strategy<Value = f64> {
    250.0..550.0f64
}

fn sky() -> impl Strategy<Value = SkyModel> {
    prop_oneof![
        Just(SkyModel::Swinbank),
        Just(SkyModel::EqualToAmbient),
        (0.0..40.0f64).prop_map(SkyModel::FixedOffset),
    ]
}

proptest! {
    #[test]
    fn equilibrium_is_a_fixed_point(t_amb in temp()) {
        let env = Environment::constant(t_amb, 0.0, SkyModel::EqualToAmbient);
        let s = CookerState::new(0.0, t_amb, t_amb, t_amb);
        prop_assert_eq!(rhs(&s, &paper_like_params(), &env).unwrap().as_array(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn container_reflector_exchange_is_antisymmetric(
        t_r in temp(), t_rf in temp(), t_f in temp(), t_amb in temp(), i_d in 0.0..1200.0f64, sky in sky(),
    ) {
        let p = paper_like_params();
        let env = Environment::constant(t_amb, i_d, sky);
        let a = fluxes(&CookerState::new(0.0, t_r, t_rf, t_f), &p, &env);
        let b = fluxes(&CookerState::new(0.0, t_rf, t_r, t_f), &p, &env);
        prop_assert_eq!(a.q4_rad, -b.q4_rad);
    }

    #[test]
    fn container_fluid_convection_flips_sign(
        t_r in temp(), t_rf in temp(), t_f in temp(), t_amb in temp(),
    ) {
        let p = paper_like_params();
        let env = Environment::constant(t_amb, 500.0, SkyModel::Swinbank);
        let a = fluxes(&CookerState::new(0.0, t_r, t_rf, t_f), &p, &env);
        let b = fluxes(&CookerState::new(0.0, t_f, t_rf, t_r), &p, &env);
        // (T_inte − T_r) is (T_f − T_r)/2, so swapping the two temperatures negates it.
        let h = p.geometry.area_absorber * p.convection.h_abs_fluid;
        prop_assert!(((a.t_inte - t_r) + (b.t_inte - t_f)).abs() < 1e-12 * t_r.max(t_f));
        prop_assert!((a.q8_conv + b.q8_conv).abs() <= 1e-12 * h * t_r.max(t_f));
        prop_assert_eq!(a.q9_rad, -b.q9_rad);
    }

    #[test]
    fn sky_losses_increase_with_own_temperature(
        t in temp(), dt in 0.01..100.0f64, other in temp(), t_amb in temp(), sky in sky(),
    ) {
        let p = paper_like_params();
        let env = Environment::constant(t_amb, 800.0, sky);
        let lo = fluxes(&CookerState::new(0.0, t, t, other), &p, &env);
        let hi_r = fluxes(&CookerState::new(0.0, t + dt, t, other), &p, &env);
        let hi_rf = fluxes(&CookerState::new(0.0, t, t + dt, other), &p, &env);
        prop_assert!(hi_r.q2_rad > lo.q2_rad);
        prop_assert!(hi_rf.q7_rad > lo.q7_rad);
    }

    #[test]
    fn celsius_inputs_give_identical_fluxes(
        c_r in -20.0..250.0f64, c_rf in -20.0..250.0f64, c_f in -20.0..100.0f64, c_amb in -20.0..45.0f64,
    ) {
        let p = paper_like_params();
        let native = CookerState::new(
            0.0,
            c_r + 273.15,
            c_rf + 273.15,
            c_f + 273.15,
        );
        let converted = CookerState::from_celsius(0.0, c_r, c_rf, c_f);
        let env_native = Environment::constant(c_amb + 273.15, 900.0, SkyModel::Swinbank);
        let env_converted = Environment::constant(celsius_to_kelvin(c_amb), 900.0, SkyModel::Swinbank);
        prop_assert_eq!(
            fluxes(&native, &p, &env_native),
            fluxes(&converted, &p, &env_converted)
        );
    }

    #[test]
    fn absorber_area_scales_its_fluxes_linearly(
        scale in 0.1..10.0f64, t_r in temp(), t_rf in temp(), t_f in temp(), t_amb in temp(),
        i_d in 0.0..1200.0f64, sky in sky(),
    ) {
        let p = paper_like_params();
        let mut q = p.clone();
        q.geometry.area_absorber *= scale;
        let env = Environment::constant(t_amb, i_d, sky);
        let s = CookerState::new(0.0, t_r, t_rf, t_f);
        let a = fluxes(&s, &p, &env);
        let b = fluxes(&s, &q, &env);
        let close = |x: f64, y: f64| (x * scale - y).abs() <= 1e-12 * (x * scale).abs().max(1e-9);
        // Q1 also carries the collector term, so only its absorber part scales.
        let direct = |f: &FluxBreakdown, pp: &CookerParams| f.q1_rad - pp.geometry.area_collector * f.irradiance_reflected;
        prop_assert!(close(direct(&a, &p), direct(&b, &q)));
        for (x, y) in [
            (a.q2_rad, b.q2_rad), (a.q3_conv, b.q3_conv), (a.q3_conv2, b.q3_conv2),
            (a.q4_rad, b.q4_rad), (a.q8_conv, b.q8_conv), (a.q9_rad, b.q9_rad),
        ] {
            prop_assert!(close(x, y), "{} vs {}", x * scale, y);
        }
        // Collector-side fluxes do not depend on the absorber area.
        prop_assert_eq!((a.q5_rad, a.q6_conv, a.q7_rad), (b.q5_rad, b.q6_conv, b.q7_rad));
    }

    #[test]
    fn rhs_is_flux_over_heat_capacity(
        t_r in temp(), t_rf in temp(), t_f in temp(), t_amb in temp(), i_d in 0.0..1200.0f64,
    ) {
        let p = paper_like_params();
        let env = Environment::constant(t_amb, i_d, SkyModel::Swinbank);
        let s = CookerState::new(0.0, t_r, t_rf, t_f);
        let f = fluxes(&s, &p, &env);
        let d = rhs(&s, &p, &env).unwrap();
        // Doubling every heat capacity halves every derivative.
        let mut q = p.clone();
        q.container.mass *= 2.0;
        q.reflectors.mass *= 2.0;
        q.fluid.mass *= 2.0;
        let d2 = rhs(&s, &q, &env).unwrap();
        prop_assert_eq!(d.d_fluid, f.fluid_net() / p.fluid.capacity());
        prop_assert!((d.d_container - 2.0 * d2.d_container).abs() <= 1e-15 * d.d_container.abs().max(1e-300));
        prop_assert!((d.d_fluid - 2.0 * d2.d_fluid).abs() <= 1e-15 * d.d_fluid.abs().max(1e-300));
    }
}

#[test]
fn energy_is_conserved_between_nodes() {
    // With every external exchange switched off, the three nodes only trade
    // heat, so the capacity-weighted derivatives sum to zero.
    let mut p = paper_like_params();
    p.convection.h_abs_ambient = 0.0;
    p.convection.h_refl_ambient = 0.0;
    p.optics.eps_reflector = 0.0;
    let env = Environment::constant(300.0, 0.0, SkyModel::EqualToAmbient);
    let s = CookerState::new(0.0, 300.0, 380.0, 340.0);
    let f = fluxes(&s, &p, &env);
    let d = rhs(&s, &p, &env).unwrap();
    // Only the container's sky loss remains external, and it is zero here.
    assert_eq!(f.q2_rad, 0.0);
    let total = d.d_container * p.container.capacity()
        + d.d_reflector * p.reflectors.capacity()
        + d.d_fluid * p.fluid.capacity();
    assert!(total.abs() < 1e-10, "{total}");
}
