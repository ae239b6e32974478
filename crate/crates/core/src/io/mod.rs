//! File formats at the boundary of the library: JSON run configuration,
//! experimental CSV input, CSV and SVG output. Values cross this boundary in
//! °C and minutes.

mod config;
mod experiment;
mod svg;
mod table;

pub use config::{
    load_config, load_run_config, EnvironmentConfig, InitialSection, ProfileConfig,
    ReflectedConfig, RunConfig, Scenario, SkyModelConfig, SolverSection,
};
pub use experiment::{load_experimental_csv, parse_experimental_csv};
pub use svg::temperature_plot_svg;
pub use table::{
    format_number, write_output_table, write_power_curve, write_residuals, write_sweep,
    OUTPUT_HEADER,
};
