//! Physical constants and unit conversions.
//!
//! Dynamics work in km and Julian years, thermal code in SI.

use std::f64::consts::PI;

/// Newtonian constant of gravitation, m³ kg⁻¹ s⁻².
pub const G_SI: f64 = 6.674_30e-11;

/// Seconds per Julian year.
pub const YEAR_S: f64 = 365.25 * 86_400.0;
pub const DAY_S: f64 = 86_400.0;
pub const MYR_S: f64 = 1.0e6 * YEAR_S;

pub const KM: f64 = 1.0e3;

pub const DEG: f64 = PI / 180.0;
pub const TWO_PI: f64 = 2.0 * PI;

/// Convert GM from km³/s² to km³/yr².
pub fn gm_per_year(gm_km3_s2: f64) -> f64 {
    gm_km3_s2 * YEAR_S * YEAR_S
}

/// rad/s to deg/day.
pub fn rad_s_to_deg_day(x: f64) -> f64 {
    x * DAY_S / DEG
}

/// Wrap an angle into [0, 2π).
pub fn wrap_two_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TWO_PI);
    // rem_euclid can return exactly 2π for tiny negative inputs
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Wrap an angle into [-π, π).
pub fn wrap_pi(x: f64) -> f64 {
    wrap_two_pi(x + PI) - PI
}
