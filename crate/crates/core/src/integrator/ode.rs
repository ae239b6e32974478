//! Explicit Runge–Kutta stepping for small fixed-size systems.
//!
//! [`dopri5`] is the Dormand–Prince 5(4) pair with PI step-size control,
//! FSAL reuse of the last stage, and the 4th-order continuous extension used
//! both for output at a fixed cadence and for locating events. [`rk4`] is the
//! classical fixed-step method.

use crate::error::Result;

/// Step sizes below this many seconds count as a failed integration.
pub const MIN_STEP: f64 = 1e-6;

/// Event times are bisected on the dense output until the bracket is this
/// narrow, in the time unit of the system.
pub const EVENT_TOLERANCE: f64 = 1e-3;

const MAX_STEPS: usize = 10_000_000;

// Dormand–Prince tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the 5th- and 4th-order solutions.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// PI controller, exponents for an error estimate of order 4.
const SAFETY: f64 = 0.9;
const PI_ALPHA: f64 = 0.7 / 5.0;
const PI_BETA: f64 = 0.4 / 5.0;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    ReachedEnd,
    /// The event function crossed zero from below at this time.
    Event(f64),
    /// The step size collapsed (or the step budget ran out) at this time.
    StepFailure(f64),
}

#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub outcome: Outcome,
    pub stats: StepStats,
}

impl<const N: usize> Trajectory<N> {
    fn start(t0: f64, y0: [f64; N]) -> Self {
        Self {
            times: vec![t0],
            states: vec![y0],
            outcome: Outcome::ReachedEnd,
            stats: StepStats::default(),
        }
    }

    fn push(&mut self, t: f64, y: [f64; N]) {
        if let Some(&last) = self.times.last() {
            if t <= last {
                return;
            }
        }
        self.times.push(t);
        self.states.push(y);
    }
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Dense-output polynomial of one accepted step.
struct Dense<const N: usize> {
    t0: f64,
    h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> Dense<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let r = &self.r;
        std::array::from_fn(|i| {
            r[0][i]
                + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])))
        })
    }
}

struct Stages<const N: usize> {
    y_new: [f64; N],
    k: [[f64; N]; 7],
    err: f64,
}

fn dopri_step<const N: usize, F>(
    f: &mut F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    opts: &AdaptiveOptions,
    stats: &mut StepStats,
) -> Result<Stages<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let k1 = *k1;
    stats.rhs_evals += 6;
    let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, &k1)]))?;
    let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]))?;
    let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(
        t + C5 * h,
        &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    )?;
    let k6 = f(
        t + h,
        &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    )?;
    let y_new = axpy(
        y,
        h,
        &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = f(t + h, &y_new)?;

    let mut err = 0.0f64;
    for i in 0..N {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
        err = err.max(e.abs() / scale);
    }
    if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
        err = f64::INFINITY;
    }
    Ok(Stages {
        y_new,
        k: [k1, k2, k3, k4, k5, k6, k7],
        err,
    })
}

fn dense_from<const N: usize>(t: f64, h: f64, y: &[f64; N], s: &Stages<N>) -> Dense<N> {
    let k = &s.k;
    let mut r = [[0.0; N]; 5];
    for i in 0..N {
        let ydiff = s.y_new[i] - y[i];
        let bspl = h * k[0][i] - ydiff;
        r[0][i] = y[i];
        r[1][i] = ydiff;
        r[2][i] = bspl;
        r[3][i] = ydiff - h * k[6][i] - bspl;
        r[4][i] = h
            * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i]
                + D7 * k[6][i]);
    }
    Dense { t0: t, h, r }
}

fn same_time(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` with the Dormand–Prince
/// 5(4) pair.
///
/// Samples are emitted at `t0 + k·output_interval` and at `t_end`. When
/// `event` is given, integration stops at the first time its value crosses
/// from negative to non-negative; that time is bisected on the dense output
/// and emitted as the last sample.
pub fn dopri5<const N: usize, F, G>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    output_interval: f64,
    opts: &AdaptiveOptions,
    event: Option<G>,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    G: Fn(&[f64; N]) -> f64,
{
    let mut traj = Trajectory::start(t0, y0);
    let mut g_old = event.as_ref().map(|g| g(&y0));
    if matches!(g_old, Some(g) if g >= 0.0) {
        traj.outcome = Outcome::Event(t0);
        return Ok(traj);
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y)?;
    traj.stats.rhs_evals += 1;
    let mut h = opts.h_init.min(opts.h_max);
    let mut err_old = 1e-4f64;
    let mut next_out = 1usize;

    while !same_time(t, t_end) && t < t_end {
        if h < MIN_STEP || traj.stats.accepted + traj.stats.rejected >= MAX_STEPS {
            traj.outcome = Outcome::StepFailure(t);
            return Ok(traj);
        }
        let last = t + h >= t_end || same_time(t + h, t_end);
        let h_step = if last { t_end - t } else { h };

        let stages = match dopri_step(&mut f, t, &y, &k1, h_step, opts, &mut traj.stats) {
            Ok(s) => s,
            Err(_) => {
                // Stage left the domain of f; shrink and retry.
                traj.stats.rejected += 1;
                h = h_step * FAC_MIN;
                continue;
            }
        };

        if stages.err > 1.0 {
            traj.stats.rejected += 1;
            let fac = if stages.err.is_finite() {
                (SAFETY * stages.err.powf(-0.2)).max(FAC_MIN)
            } else {
                FAC_MIN
            };
            h = h_step * fac;
            continue;
        }

        traj.stats.accepted += 1;
        let t_new = if last { t_end } else { t + h_step };
        let dense = dense_from(t, h_step, &y, &stages);

        let mut stop_at = None;
        if let (Some(g), Some(go)) = (event.as_ref(), g_old) {
            let g_new = g(&stages.y_new);
            if go < 0.0 && g_new >= 0.0 {
                let (mut lo, mut hi) = (t, t_new);
                while hi - lo > EVENT_TOLERANCE {
                    let mid = 0.5 * (lo + hi);
                    if g(&dense.eval(mid)) >= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                stop_at = Some(hi);
            }
            g_old = Some(g_new);
        }

        let horizon = stop_at.unwrap_or(t_new);
        loop {
            let t_out = t0 + next_out as f64 * output_interval;
            if stop_at.is_some() && t_out >= horizon {
                break;
            }
            if same_time(t_out, t_new) {
                traj.push(t_out, stages.y_new);
            } else if t_out < t_new {
                traj.push(t_out, dense.eval(t_out));
            } else {
                break;
            }
            next_out += 1;
        }

        if let Some(te) = stop_at {
            let y_ev = if te == t_new { stages.y_new } else { dense.eval(te) };
            traj.push(te, y_ev);
            traj.outcome = Outcome::Event(te);
            return Ok(traj);
        }

        t = t_new;
        y = stages.y_new;
        k1 = stages.k[6];

        let err = stages.err.max(1e-10);
        let fac = (SAFETY * err.powf(-PI_ALPHA) * err_old.powf(PI_BETA)).clamp(FAC_MIN, FAC_MAX);
        err_old = err;
        h = (h_step * fac).min(opts.h_max);
        if last {
            break;
        }
    }
    traj.push(t_end, y);
    Ok(traj)
}

/// Classical fourth-order Runge–Kutta with constant step `h`, emitting every
/// step. The final step is shortened to land on `t_end`. With an event, the
/// run stops at the first step whose end state has a non-negative event value.
pub fn rk4<const N: usize, F, G>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    h: f64,
    event: Option<G>,
) -> Result<Trajectory<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    G: Fn(&[f64; N]) -> f64,
{
    let mut traj = Trajectory::start(t0, y0);
    if let Some(g) = event.as_ref() {
        if g(&y0) >= 0.0 {
            traj.outcome = Outcome::Event(t0);
            return Ok(traj);
        }
    }
    let mut t = t0;
    let mut y = y0;
    let mut n_steps = 0usize;
    while !same_time(t, t_end) && t < t_end {
        let t_next = t0 + (n_steps + 1) as f64 * h;
        let t_next = if t_next > t_end || same_time(t_next, t_end) {
            t_end
        } else {
            t_next
        };
        let dt = t_next - t;
        let mut step = |y: &[f64; N]| -> Result<[f64; N]> {
            let k1 = f(t, y)?;
            let k2 = f(t + 0.5 * dt, &axpy(y, dt, &[(0.5, &k1)]))?;
            let k3 = f(t + 0.5 * dt, &axpy(y, dt, &[(0.5, &k2)]))?;
            let k4 = f(t + dt, &axpy(y, dt, &[(1.0, &k3)]))?;
            Ok(axpy(
                y,
                dt,
                &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)],
            ))
        };
        traj.stats.rhs_evals += 4;
        y = match step(&y) {
            Ok(next) => next,
            Err(_) => {
                traj.outcome = Outcome::StepFailure(t);
                return Ok(traj);
            }
        };
        traj.stats.accepted += 1;
        t = t_next;
        n_steps += 1;
        if y.iter().any(|v| !v.is_finite()) {
            traj.outcome = Outcome::StepFailure(t);
            return Ok(traj);
        }
        traj.push(t, y);
        if let Some(g) = event.as_ref() {
            if g(&y) >= 0.0 {
                traj.outcome = Outcome::Event(t);
                return Ok(traj);
            }
        }
    }
    Ok(traj)
}
