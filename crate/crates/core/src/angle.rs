//! Phase arithmetic: canonical wrapping and distance to the nearest multiple of a period.

use std::f64::consts::{PI, TAU};

/// Wraps a phase into `[0, 2π)`.
pub fn wrap_two_pi(phase: f64) -> f64 {
    let wrapped = phase.rem_euclid(TAU);
    // rem_euclid can return exactly TAU for tiny negative inputs
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Wraps a phase into `(-π, π]`.
pub fn wrap_signed(phase: f64) -> f64 {
    let wrapped = wrap_two_pi(phase);
    if wrapped > PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

/// Distance from `x` to the nearest integer multiple of `period`. Always in `[0, period/2]`.
pub fn distance_to_multiple(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    r.min(period - r).max(0.0)
}

/// Distance from `x` to the nearest multiple of π.
pub fn distance_mod_pi(x: f64) -> f64 {
    distance_to_multiple(x, PI)
}

/// Distance from `x` to the nearest multiple of 2π.
pub fn distance_mod_two_pi(x: f64) -> f64 {
    distance_to_multiple(x, TAU)
}
