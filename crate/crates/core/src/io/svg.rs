//! Temperature-versus-time plots as standalone SVG 1.1.

use std::fmt::Write;

use crate::integrator::SimulationResult;
use crate::units::{kelvin_to_celsius, seconds_to_minutes};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    values: Vec<f64>,
}

/// Picks a "nice" tick step (1, 2 or 5 × 10^k) giving about `target` ticks.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = (span / target).max(f64::MIN_POSITIVE);
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn padded_range(lo: f64, hi: f64) -> (f64, f64) {
    if hi - lo < 1e-9 {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

/// Renders fluid, container and reflector temperatures (°C) against time
/// (min), one `<polyline>` per series.
pub fn temperature_plot_svg(result: &SimulationResult, title: &str) -> String {
    let minutes: Vec<f64> = result.times().map(seconds_to_minutes).collect();
    let series = [
        Series {
            label: "T_fluid",
            color: "#1f77b4",
            values: result.samples.iter().map(|s| kelvin_to_celsius(s.state.t_fluid)).collect(),
        },
        Series {
            label: "T_container",
            color: "#d62728",
            values: result.samples.iter().map(|s| kelvin_to_celsius(s.state.t_container)).collect(),
        },
        Series {
            label: "T_reflector",
            color: "#2ca02c",
            values: result.samples.iter().map(|s| kelvin_to_celsius(s.state.t_reflector)).collect(),
        },
    ];

    let finite = |v: &&f64| v.is_finite();
    let x_lo = minutes.iter().filter(finite).copied().fold(f64::INFINITY, f64::min);
    let x_hi = minutes.iter().filter(finite).copied().fold(f64::NEG_INFINITY, f64::max);
    let (x_lo, x_hi) = if x_lo.is_finite() { (x_lo, x_hi.max(x_lo + 1e-9)) } else { (0.0, 1.0) };
    let all_y = series.iter().flat_map(|s| s.values.iter()).filter(finite);
    let y_lo = all_y.clone().copied().fold(f64::INFINITY, f64::min);
    let y_hi = all_y.copied().fold(f64::NEG_INFINITY, f64::max);
    let (y_lo, y_hi) = if y_lo.is_finite() { padded_range(y_lo, y_hi) } else { (0.0, 1.0) };

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let py = |y: f64| TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );

    // Axes and ticks.
    let _ = writeln!(
        svg,
        r#"<g stroke="black" fill="none"><rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}"/></g>"#
    );
    let _ = writeln!(svg, r##"<g stroke="#ccc" stroke-width="0.5">"##);
    let mut ticks = String::new();
    let xs = tick_step(x_hi - x_lo, 8.0);
    let mut x = (x_lo / xs).ceil() * xs;
    while x <= x_hi + 1e-9 * xs {
        let _ = writeln!(svg, r#"<line x1="{0:.2}" y1="{TOP}" x2="{0:.2}" y2="{1:.2}"/>"#, px(x), TOP + plot_h);
        let _ = writeln!(
            ticks,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px(x),
            TOP + plot_h + 18.0,
            trim_tick(x)
        );
        x += xs;
    }
    let ys = tick_step(y_hi - y_lo, 6.0);
    let mut y = (y_lo / ys).ceil() * ys;
    while y <= y_hi + 1e-9 * ys {
        let _ = writeln!(svg, r#"<line x1="{LEFT}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}"/>"#, py(y), LEFT + plot_w);
        let _ = writeln!(
            ticks,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(y) + 4.0,
            trim_tick(y)
        );
        y += ys;
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str(&ticks);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">time (min)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" transform="rotate(-90 18 {0:.2})">temperature (°C)</text>"#,
        TOP + plot_h / 2.0
    );

    for (k, s) in series.iter().enumerate() {
        let points: Vec<String> = minutes
            .iter()
            .zip(&s.values)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            s.color,
            points.join(" "),
            s.label
        );
        let ly = TOP + 20.0 + 20.0 * k as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 25.0,
            s.color,
            lx + 32.0,
            ly + 4.0,
            s.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn trim_tick(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    let r = if r == 0.0 { 0.0 } else { r };
    format!("{r}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
