//! Thin free-function wrappers over `libm` so the rest of the crate never
//! names the dependency directly and stays `no_std`-clean. Methods that
//! `core` already provides (`abs`, `max`, `min`, classification) are used
//! directly on `f64`.

#![allow(dead_code)]

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn cbrt(x: f64) -> f64 {
    libm::cbrt(x)
}

pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

pub(crate) fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

pub(crate) fn asinh(x: f64) -> f64 {
    libm::asinh(x)
}

pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}
