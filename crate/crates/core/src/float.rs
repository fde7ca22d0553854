//! Floating-point comparison policy shared by every module.
//!
//! All game quantities are `f64`. Two values are considered equal when they
//! differ by less than `ABS_TOL + REL_TOL * max(|a|, |b|)`. The smallest
//! nonzero loss term at realistic parameters is around `1e-6`, far above the
//! tolerance, so genuine strict improvements are never masked.

pub const ABS_TOL: f64 = 1e-9;
pub const REL_TOL: f64 = 1e-12;

#[inline]
pub fn tolerance(a: f64, b: f64) -> f64 {
    ABS_TOL + REL_TOL * a.abs().max(b.abs())
}

#[inline]
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= tolerance(a, b)
}

/// `a < b` by more than the comparison tolerance.
#[inline]
pub fn definitely_less(a: f64, b: f64) -> bool {
    a < b - tolerance(a, b)
}

#[inline]
pub fn definitely_greater(a: f64, b: f64) -> bool {
    definitely_less(b, a)
}
