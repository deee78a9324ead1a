//! Integer-order Bessel functions from the angular integral
//! `J_n(x) = (1/2pi) int_{-pi}^{pi} exp(i n t) exp(-i x sin t) dt`
//! and its generalization with an extra `exp(i c sin^2 t)` weight.
//!
//! Both go through [`theta_kernel`], so at `c = 0` the generalized
//! function reproduces `bessel_jn` bit for bit.

use num_complex::Complex64;

use super::quadrature::{periodic_mean, QuadratureSpec};
use crate::error::{Error, Result};

pub fn theta_kernel(n: i64, x: f64, c: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let nf = n as f64;
    periodic_mean(
        |t| {
            let s = t.sin();
            Complex64::from_polar(1.0, nf * t - x * s + c * s * s)
        },
        spec,
        "theta integral",
    )
}

pub fn bessel_jn(n: u32, x: f64) -> Result<f64> {
    bessel_jn_with(n as i64, x, &QuadratureSpec::default())
}

/// `J_n(x)` for any integer `n` (negative orders follow from the same
/// integral, `J_{-n} = (-1)^n J_n`).
pub fn bessel_jn_with(n: i64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    let v = theta_kernel(n, x, 0.0, spec)?;
    if v.im.abs() > spec.abs_tol {
        return Err(Error::ResidualImaginary {
            residual: v.im.abs(),
            tol: spec.abs_tol,
        });
    }
    Ok(v.re)
}

pub fn generalized_bessel(n: i64, x: f64, c: f64) -> Result<Complex64> {
    generalized_bessel_with(n, x, c, &QuadratureSpec::default())
}

pub fn generalized_bessel_with(n: i64, x: f64, c: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    theta_kernel(n, x, c, spec)
}
