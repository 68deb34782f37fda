// Float helpers that resolve to libm without std.
use num_complex::Complex64;
use num_traits::Float;

pub(crate) use core::f64::consts::{FRAC_PI_2, PI, TAU};

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    Float::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    Float::cos(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    Float::atan2(y, x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    Float::abs(x)
}

/// e^{i·phi}
#[inline]
pub(crate) fn cis(phi: f64) -> Complex64 {
    Complex64::new(cos(phi), sin(phi))
}

/// Reduces an angle into [0, 2π).
pub(crate) fn wrap_tau(x: f64) -> f64 {
    let r = x % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    // -tiny % TAU + TAU can round up to exactly TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces an angle into (−π, π].
pub(crate) fn wrap_pi(x: f64) -> f64 {
    let r = wrap_tau(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}
