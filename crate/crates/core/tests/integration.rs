//! Integrator behavior on analytic problems and on the cooker model.

use cooker_core::integrator::ode::{dopri5, rk4, AdaptiveOptions, Outcome};
use cooker_core::integrator::{integrate, integrate_fixed_step, SolverConfig, Status, MIN_STEP};
use cooker_core::presets::{paper_like_environment, paper_like_params, paper_like_solver};
use cooker_core::thermal::{CookerState, Environment, SkyModel};
use cooker_core::Error;

const K: f64 = 1e-3;
const T_INF: f64 = 293.15;
const T0: f64 = 343.15;

fn decay_exact(t: f64) -> f64 {
    T_INF + (T0 - T_INF) * (-K * t).exp()
}

fn decay(_: f64, y: &[f64; 1]) -> cooker_core::Result<[f64; 1]> {
    Ok([-K * (y[0] - T_INF)])
}

fn default_opts() -> AdaptiveOptions {
    let d = SolverConfig::default();
    AdaptiveOptions {
        rel_tol: d.rel_tol,
        abs_tol: d.abs_tol,
        h_init: d.h_init,
        h_max: d.h_max,
    }
}

fn no_event() -> Option<fn(&[f64; 1]) -> f64> {
    None
}

#[test]
fn decay_matches_closed_form() {
    let tr = dopri5(decay, 0.0, [T0], 1000.0, 60.0, &default_opts(), no_event()).unwrap();
    let last = tr.states.last().unwrap()[0];
    // 20 + 50/e °C
    assert!((last - 273.15 - 38.39397).abs() < 1e-5, "{last}");
    for (t, y) in tr.times.iter().zip(&tr.states) {
        assert!((y[0] - decay_exact(*t)).abs() < 1e-6, "t={t}");
    }
}

fn rk4_max_error(h: f64) -> f64 {
    let tr = rk4(decay, 0.0, [T0], 1000.0, h, no_event()).unwrap();
    tr.times
        .iter()
        .zip(&tr.states)
        .map(|(t, y)| (y[0] - decay_exact(*t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn rk4_is_fourth_order() {
    let ratio = rk4_max_error(20.0) / rk4_max_error(10.0);
    assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    let order = ratio.log2();
    assert!((3.8..=4.2).contains(&order), "order {order}");
}

fn equilibrium() -> (Environment, CookerState) {
    let env = Environment::constant(298.15, 0.0, SkyModel::EqualToAmbient);
    let s = CookerState::at_ambient(&env);
    (env, s)
}

#[test]
fn equilibrium_stays_put() {
    let (env, s) = equilibrium();
    let p = paper_like_params();
    let run = integrate(&p, &env, &s, &SolverConfig::default()).unwrap();
    assert_eq!(run.status, Status::ReachedEnd);
    assert_eq!(run.samples.len(), 181);
    assert!(run.samples.iter().all(|x| x.state.temperatures_eq(&s)));

    let fixed = integrate_fixed_step(&p, &env, &s, &SolverConfig::default(), 60.0).unwrap();
    assert_eq!(fixed.samples.len(), 181);
    assert!(fixed.samples.iter().all(|x| x.state.temperatures_eq(&s)));
}

trait SameTemps {
    fn temperatures_eq(&self, other: &CookerState) -> bool;
}

impl SameTemps for CookerState {
    fn temperatures_eq(&self, o: &CookerState) -> bool {
        self.t_container == o.t_container && self.t_reflector == o.t_reflector && self.t_fluid == o.t_fluid
    }
}

#[test]
fn fixed_step_equal_to_span_takes_one_step() {
    let (env, s) = equilibrium();
    let cfg = SolverConfig::default();
    let run = integrate_fixed_step(&paper_like_params(), &env, &s, &cfg, cfg.t_end).unwrap();
    assert_eq!(run.stats.accepted, 1);
    assert_eq!(run.samples.len(), 2);
}

#[test]
fn samples_start_at_initial_state_and_increase() {
    let env = paper_like_environment();
    let s = CookerState::at_ambient(&env);
    let run = integrate(&paper_like_params(), &env, &s, &paper_like_solver()).unwrap();
    assert_eq!(run.first().state, s);
    assert!(run.times().zip(run.times().skip(1)).all(|(a, b)| b > a));
}

#[test]
fn paper_like_run_boils_in_about_two_hours() {
    let env = paper_like_environment();
    let s = CookerState::at_ambient(&env);
    let run = integrate(&paper_like_params(), &env, &s, &paper_like_solver()).unwrap();
    let t_boil = run.boiling_time().expect("should boil") / 60.0;
    assert!((90.0..=150.0).contains(&t_boil), "{t_boil} min");
    // Monotone heating of the fluid.
    assert!(run
        .samples
        .windows(2)
        .all(|w| w[1].state.t_fluid >= w[0].state.t_fluid));
    // The last sample sits on the boiling point.
    let last = run.last().state;
    assert_eq!(last.time, t_boil * 60.0);
    assert!((last.t_fluid - paper_like_solver().boiling_point).abs() < 1e-4);
    // Every other sample is on the one-minute grid.
    for (i, x) in run.samples[..run.samples.len() - 1].iter().enumerate() {
        assert_eq!(x.state.time, i as f64 * 60.0);
    }
}

#[test]
fn adaptive_and_fixed_step_agree() {
    let env = paper_like_environment();
    let s = CookerState::at_ambient(&env);
    let cfg = paper_like_solver();
    let adaptive = integrate(&paper_like_params(), &env, &s, &cfg).unwrap();
    let fixed = integrate_fixed_step(&paper_like_params(), &env, &s, &cfg, 0.5).unwrap();
    let mut matched = 0;
    for a in &adaptive.samples {
        // Fixed samples sit at multiples of 0.5 s.
        let idx = (a.state.time / 0.5).round() as usize;
        let Some(f) = fixed.samples.get(idx) else { continue };
        if f.state.time != a.state.time {
            continue;
        }
        matched += 1;
        for (x, y) in [
            (a.state.t_container, f.state.t_container),
            (a.state.t_reflector, f.state.t_reflector),
            (a.state.t_fluid, f.state.t_fluid),
        ] {
            assert!((x - y).abs() <= 10.0 * cfg.rel_tol * x.abs(), "t={} {x} vs {y}", a.state.time);
        }
    }
    assert!(matched > 100, "{matched}");
}

#[test]
fn runs_are_deterministic() {
    let env = paper_like_environment();
    let s = CookerState::at_ambient(&env);
    let a = integrate(&paper_like_params(), &env, &s, &paper_like_solver()).unwrap();
    let b = integrate(&paper_like_params(), &env, &s, &paper_like_solver()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn runaway_run_reports_step_failure() {
    // A huge container-fluid coefficient with the printed sign pumps heat
    // from the fluid into the container until the fluid leaves the domain.
    let mut p = paper_like_params();
    p.convection.h_abs_fluid = 1e9;
    let env = paper_like_environment();
    let s = CookerState::new(0.0, 320.0, 303.15, 303.15);
    let run = integrate(&p, &env, &s, &paper_like_solver()).unwrap();
    assert!(matches!(run.status, Status::StepFailure(_)), "{:?}", run.status);
    assert!(!run.samples.is_empty());
    assert_eq!(run.first().state, s);
}

#[test]
fn invalid_inputs_are_rejected() {
    let env = paper_like_environment();
    let p = paper_like_params();
    let bad_state = CookerState::new(0.0, -1.0, 300.0, 300.0);
    assert!(matches!(
        integrate(&p, &env, &bad_state, &SolverConfig::default()),
        Err(Error::Domain(_))
    ));
    let s = CookerState::at_ambient(&env);
    let cfg = SolverConfig {
        h_init: 0.0,
        ..SolverConfig::default()
    };
    assert!(integrate(&p, &env, &s, &cfg).is_err());
    assert!(integrate_fixed_step(&p, &env, &s, &SolverConfig::default(), 0.0).is_err());
    assert!(integrate_fixed_step(&p, &env, &s, &SolverConfig::default(), f64::NAN).is_err());
}

#[test]
fn step_floor_is_one_microsecond() {
    assert_eq!(MIN_STEP, 1e-6);
    let opts = AdaptiveOptions {
        rel_tol: 1e-10,
        abs_tol: 1e-10,
        h_init: 1e-3,
        h_max: 1.0,
    };
    // y' = 1/(1 - t) is singular at t = 1.
    let tr = dopri5(
        |t, _: &[f64; 1]| Ok([1.0 / (1.0 - t)]),
        0.0,
        [0.0],
        2.0,
        0.1,
        &opts,
        no_event(),
    )
    .unwrap();
    assert!(matches!(tr.outcome, Outcome::StepFailure(t) if t < 1.0));
}

#[test]
fn fixed_step_boiling_lands_on_a_step() {
    let env = paper_like_environment();
    let s = CookerState::at_ambient(&env);
    let run = integrate_fixed_step(&paper_like_params(), &env, &s, &paper_like_solver(), 30.0).unwrap();
    let Status::Boiled(t) = run.status else { panic!("{:?}", run.status) };
    assert_eq!(t % 30.0, 0.0);
    assert!(run.last().state.t_fluid >= paper_like_solver().boiling_point);
    let before = &run.samples[run.samples.len() - 2];
    assert!(before.state.t_fluid < paper_like_solver().boiling_point);
}
