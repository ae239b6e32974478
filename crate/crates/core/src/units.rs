//! Boundary unit conversions. Everything inside the crate is SI (K, s, W).

pub const ZERO_CELSIUS: f64 = 273.15;
pub const SECONDS_PER_MINUTE: f64 = 60.0;

#[inline]
pub fn celsius_to_kelvin(c: f64) -> f64 {
    c + ZERO_CELSIUS
}

#[inline]
pub fn kelvin_to_celsius(k: f64) -> f64 {
    k - ZERO_CELSIUS
}

#[inline]
pub fn minutes_to_seconds(m: f64) -> f64 {
    m * SECONDS_PER_MINUTE
}

#[inline]
pub fn seconds_to_minutes(s: f64) -> f64 {
    s / SECONDS_PER_MINUTE
}
