//! CSV emission of run results.

use std::io::Write;

use crate::error::{Error, Result};
use crate::integrator::SimulationResult;
use crate::metrics::{PowerCurve, Residual};
use crate::sweep::SweepResult;
use crate::units::{kelvin_to_celsius, seconds_to_minutes};

pub const OUTPUT_HEADER: [&str; 6] = [
    "time_min",
    "T_fluid_C",
    "T_container_C",
    "T_reflector_C",
    "P_watts",
    "deltaT_C",
];

/// Formats `v` so that it parses back to the same `f64` and shows at least
/// six significant digits.
pub fn format_number(v: f64) -> String {
    let s = format!("{v}");
    if !v.is_finite() {
        return s;
    }
    let significant = s
        .chars()
        .filter(char::is_ascii_digit)
        .skip_while(|&c| c == '0')
        .count();
    if significant >= 6 {
        return s;
    }
    let magnitude = if v == 0.0 {
        0
    } else {
        v.abs().log10().floor() as i32
    };
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv {
        row: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: "<output>".into(),
        source: e,
    }
}

/// One row per sample: time, the three temperatures, cooking power, ΔT.
pub fn write_output_table<W: Write>(result: &SimulationResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(OUTPUT_HEADER).map_err(csv_err)?;
    for s in &result.samples {
        let st = &s.state;
        w.write_record([
            format_number(seconds_to_minutes(st.time)),
            format_number(kelvin_to_celsius(st.t_fluid)),
            format_number(kelvin_to_celsius(st.t_container)),
            format_number(kelvin_to_celsius(st.t_reflector)),
            format_number(s.cooking_power),
            format_number(st.t_fluid - s.fluxes.t_ambient),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn write_power_curve<W: Write>(
    result: &SimulationResult,
    curve: &PowerCurve,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["time_min", "deltaT_C", "P_watts"]).map_err(csv_err)?;
    for (s, p) in result.samples.iter().zip(&curve.points) {
        w.write_record([
            format_number(seconds_to_minutes(s.state.time)),
            format_number(p.delta_t),
            format_number(p.power),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn write_residuals<W: Write>(residuals: &[Residual], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["time_min", "T_exp_C", "T_sim_C", "residual_C"])
        .map_err(csv_err)?;
    for r in residuals {
        w.write_record([
            format_number(seconds_to_minutes(r.time)),
            format_number(kelvin_to_celsius(r.t_experiment)),
            format_number(kelvin_to_celsius(r.t_simulated)),
            format_number(r.difference()),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

/// One row per grid point. Missing outputs are left empty; `failure` holds
/// the reason a point could not be simulated.
pub fn write_sweep<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = result.params.iter().map(|p| p.name().to_string()).collect();
    header.extend(
        ["boiling_time_min", "std_power_W", "final_T_fluid_C", "failure"].map(String::from),
    );
    w.write_record(&header).map_err(csv_err)?;
    for row in &result.rows {
        let mut rec: Vec<String> = row.values.iter().map(|&v| format_number(v)).collect();
        rec.push(opt(row.boiling_time.map(seconds_to_minutes)));
        rec.push(opt(row.standardized_power));
        rec.push(opt(row.final_t_fluid.map(kelvin_to_celsius)));
        rec.push(row.failure.clone().unwrap_or_default());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}
