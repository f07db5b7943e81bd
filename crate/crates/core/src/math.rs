//! Thin shims over `libm` so the crate builds without `std`. Using one libm
//! implementation everywhere also keeps outputs bit-identical across hosts.

use crate::C64;

pub const TAU: f64 = 2.0 * core::f64::consts::PI;

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

#[inline]
pub fn powf(x: f64, p: f64) -> f64 {
    libm::pow(x, p)
}

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// `e^{ix}` on the unit circle.
#[inline]
pub fn cis(x: f64) -> C64 {
    C64::new(cos(x), sin(x))
}

#[inline]
pub fn cabs(z: C64) -> f64 {
    hypot(z.re, z.im)
}
