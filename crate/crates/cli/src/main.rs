use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cooker_core::calibration::{calibrate, ParamPath, ParamSpec};
use cooker_core::integrator::{integrate, SimulationResult, Status};
use cooker_core::io::{
    load_experimental_csv, load_run_config, temperature_plot_svg, write_output_table,
    write_power_curve, write_residuals, write_sweep, RunConfig, Scenario,
};
use cooker_core::metrics::{
    cooking_power_series, relative_error, residuals, standardized_cooking_power, StdPowerMethod,
};
use cooker_core::sweep::{sweep, GridAxis};
use cooker_core::units::seconds_to_minutes;
use cooker_core::Error;

/// Concentrating solar cooker simulator.
#[derive(Debug, Parser)]
#[command(name = "cooker", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration.
    #[arg(short = 'c', long = "config")]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the model and write the temperature table as CSV.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Also write an SVG plot of the three temperatures.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Score a run against measured fluid temperatures.
    Compare {
        #[command(flatten)]
        common: Common,
        /// CSV with columns time_min,T_fluid_C[,err_C].
        #[arg(short = 'e', long = "experiment")]
        experiment: PathBuf,
    },
    /// Cooking power curve and standardized cooking power at ΔT = 50 K.
    Power {
        #[command(flatten)]
        common: Common,
        /// Report only this method; both are printed by default.
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Fit parameters to measured fluid temperatures; writes the fitted config.
    Calibrate {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'e', long = "experiment")]
        experiment: PathBuf,
        /// Comma-separated parameter paths, e.g. convection.h_abs_fluid.
        #[arg(long, value_delimiter = ',', required = true)]
        free: Vec<String>,
        /// One lo:hi pair per free parameter, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        bounds: Vec<String>,
    },
    /// Evaluate the model over a cartesian parameter grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// param:lo:hi:steps, comma-separated for several axes.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Interpolate,
    Regression,
}

impl From<Method> for StdPowerMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Interpolate => StdPowerMethod::Interpolate,
            Method::Regression => StdPowerMethod::LinearRegression,
        }
    }
}

/// Failure classes, mapped onto the process exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Range(_) => Failure::Numerical(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Data(format!("{}: {e}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| io_failure(p, e))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn load(path: &Path) -> Result<(RunConfig, Scenario), Failure> {
    let cfg = load_run_config(path)?;
    let scenario = cfg.to_scenario()?;
    Ok((cfg, scenario))
}

fn run_model(s: &Scenario) -> Result<SimulationResult, Failure> {
    Ok(integrate(&s.params, &s.env, &s.initial, &s.solver)?)
}

fn check_status(run: &SimulationResult) -> Result<(), Failure> {
    match run.status {
        Status::StepFailure(t) => Err(Failure::Numerical(format!(
            "integration failed: step size underflow at t = {:.3} min",
            seconds_to_minutes(t)
        ))),
        _ => Ok(()),
    }
}

fn parse_bounds(s: &str) -> Result<(f64, f64), Failure> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("bounds `{s}` must look like lo:hi")))?;
    let num = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| Failure::Usage(format!("`{v}` in bounds `{s}` is not a number")))
    };
    Ok((num(lo)?, num(hi)?))
}

fn parse_param(s: &str) -> Result<ParamPath, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn parse_axis(s: &str) -> Result<GridAxis, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let [param, lo, hi, steps] = parts.as_slice() else {
        return Err(Failure::Usage(format!(
            "grid axis `{s}` must look like param:lo:hi:steps"
        )));
    };
    let (lo, hi) = parse_bounds(&format!("{lo}:{hi}"))?;
    let steps: usize = steps
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("steps `{steps}` in `{s}` is not a count")))?;
    GridAxis::new(parse_param(param)?, lo, hi, steps).map_err(|e| Failure::Usage(e.to_string()))
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { common, plot } => {
            let (_, s) = load(&common.config)?;
            let run = run_model(&s)?;
            write_output_table(&run, output(common.out.as_deref())?)?;
            if let Some(p) = plot {
                let title = match run.status {
                    Status::Boiled(t) => format!("boiling at {:.1} min", seconds_to_minutes(t)),
                    _ => "temperatures".to_string(),
                };
                std::fs::write(&p, temperature_plot_svg(&run, &title))
                    .map_err(|e| io_failure(&p, e))?;
            }
            check_status(&run)
        }
        Command::Compare { common, experiment } => {
            let (_, s) = load(&common.config)?;
            let exp = load_experimental_csv(&experiment)?;
            let run = run_model(&s)?;
            check_status(&run)?;
            let err = relative_error(&run, &exp)?;
            let res = residuals(&run, &exp)?;
            println!("relative error: {err:.2}%");
            if common.out.is_none() {
                println!();
            }
            write_residuals(&res, output(common.out.as_deref())?)?;
            Ok(())
        }
        Command::Power { common, method } => {
            let (_, s) = load(&common.config)?;
            let run = run_model(&s)?;
            check_status(&run)?;
            let curve = cooking_power_series(&run)?;
            let methods: Vec<Method> = match method {
                Some(m) => vec![m],
                None => vec![Method::Interpolate, Method::Regression],
            };
            let mut lines = Vec::new();
            for m in methods {
                let p = standardized_cooking_power(&curve, m.into())?;
                let name = m.to_possible_value().expect("not skipped").get_name().to_string();
                lines.push(format!("standardized power ({name}): {p:.3} W"));
            }
            let to_stdout = common.out.is_none();
            write_power_curve(&run, &curve, output(common.out.as_deref())?)?;
            if to_stdout {
                println!();
            }
            for l in lines {
                println!("{l}");
            }
            Ok(())
        }
        Command::Calibrate {
            common,
            experiment,
            free,
            bounds,
        } => {
            if free.len() != bounds.len() {
                return Err(Failure::Usage(format!(
                    "{} free parameters but {} bounds",
                    free.len(),
                    bounds.len()
                )));
            }
            let specs = free
                .iter()
                .zip(&bounds)
                .map(|(f, b)| {
                    let (lo, hi) = parse_bounds(b)?;
                    ParamSpec::new(parse_param(f)?, lo, hi).map_err(|e| Failure::Usage(e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let (cfg, s) = load(&common.config)?;
            let exp = load_experimental_csv(&experiment)?;
            let fit = calibrate(&s.params, &s.env, &s.initial, &s.solver, &specs, &exp)?;
            if fit.error >= cooker_core::calibration::PENALTY {
                return Err(Failure::Numerical(
                    "no candidate produced a run covering the experiment".into(),
                ));
            }
            let mut report = io::stderr().lock();
            for spec in &specs {
                let _ = writeln!(report, "{} = {}", spec.param, spec.param.get(&fit.params));
            }
            let _ = writeln!(
                report,
                "relative error: {:.4}% after {} iterations{}",
                fit.error,
                fit.search.iterations,
                if fit.search.converged { "" } else { " (not converged)" }
            );
            let mut out = output(common.out.as_deref())?;
            writeln!(out, "{}", cfg.with_params(&fit.params).to_json_pretty())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Data(e.to_string()))
        }
        Command::Sweep { common, grid } => {
            let axes = grid.iter().map(|g| parse_axis(g)).collect::<Result<Vec<_>, _>>()?;
            let (_, s) = load(&common.config)?;
            let result = sweep(&s.params, &s.env, &s.initial, &s.solver, &axes)?;
            write_sweep(&result, output(common.out.as_deref())?)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
