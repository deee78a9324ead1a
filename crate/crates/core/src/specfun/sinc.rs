//! The Sinc family built on `(1/b) int_{-b}^{b} exp(i u x) du`.
//!
//! Note the normalization: the value at the origin is 2, not 1.

use num_complex::Complex64;

use super::quadrature::{interval_integral, QuadratureSpec};
use crate::error::{Error, Result};

pub fn box_sinc(b: f64, x: f64) -> f64 {
    let z = b * x;
    if z == 0.0 {
        2.0
    } else {
        2.0 * z.sin() / z
    }
}

pub fn check_width(b: f64) -> Result<()> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sinc width b must be positive, got {b}"
        )));
    }
    Ok(())
}

/// `int_{-b}^{b} u^2 exp(i u y) du`, which is real.
pub fn second_moment(b: f64, y: f64) -> f64 {
    let z = b * y;
    if z.abs() < 1.0 {
        // 2 b^3 sum_m (-1)^m z^{2m} / ((2m)! (2m+3))
        let z2 = z * z;
        let mut term = 1.0;
        let mut sum = 1.0 / 3.0;
        for m in 1..20 {
            let mf = m as f64;
            term *= -z2 / ((2.0 * mf - 1.0) * (2.0 * mf));
            let add = term / (2.0 * mf + 3.0);
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        2.0 * b * b * b * sum
    } else {
        let (s, c) = z.sin_cos();
        2.0 * (b * b * s / y + 2.0 * b * c / (y * y) - 2.0 * s / (y * y * y))
    }
}

/// `int_{-b}^{b} exp(i c u^2) exp(i u y) du` by quadrature.
pub fn chirped_kernel(b: f64, y: f64, c: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    interval_integral(
        |u| Complex64::from_polar(1.0, c * u * u + u * y),
        -b,
        b,
        spec,
        "sinc kernel",
    )
}
