//! Closed-form evolutions.
//!
//! The Airy family is handled through a single formula with a complex
//! chirp `a = alpha + i beta`: a Gaussian envelope `exp(-beta x^2)` is just
//! the imaginary part of the chirp, so
//!
//! ```text
//! s = 1 + 2 a t,  tau = t / s,  y = x / s
//! psi = s^{-1/2} exp(i a x^2 / s) Ai(eps (y - eps^3 tau^2 / 4))
//!       exp(i (eps^3 tau / 2) (y - eps^3 tau^2 / 6))
//! ```
//!
//! covers the plain Airy packet (`a = 0`), the apodized packet, their
//! chirped versions, and (without the Airy factor) chirped Gaussians.

use num_complex::Complex64;

use super::{EvolvedField, Method};
use crate::error::{Error, Result};
use crate::factorization::{forward_coeffs, FactorCoeffs};
use crate::gridfield::{Grid, WaveField};
use crate::specfun::{airy_ai_complex, bessel_jn_with, generalized_bessel_with, sinc, QuadratureSpec};
use crate::state::{sample_with, InitialState};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex chirp `a`, squeeze `s` and prefactor pieces shared by the Airy
/// and Gaussian forms.
#[derive(Debug, Clone, Copy)]
struct ComplexChirp {
    a: Complex64,
    t: f64,
    s: Complex64,
    amp: Complex64,
}

impl ComplexChirp {
    fn new(alpha: f64, beta: f64, t: f64) -> Self {
        let a = Complex64::new(alpha, beta);
        let s = 1.0 + 2.0 * a * t;
        ComplexChirp {
            a,
            t,
            s,
            amp: s.sqrt().inv(),
        }
    }

    fn envelope(&self, x: f64) -> Complex64 {
        self.amp * (I * self.a * x * x / self.s).exp()
    }

    fn airy(&self, eps: f64, x: f64) -> Complex64 {
        let y = x / self.s;
        let tau = self.t / self.s;
        let e3 = eps * eps * eps;
        let arg = eps * (y - e3 * tau * tau / 4.0);
        let phase = I * (e3 * tau / 2.0) * (y - e3 * tau * tau / 6.0);
        self.envelope(x) * airy_ai_complex(arg) * phase.exp()
    }
}

/// Chirped, apodized Airy packet `Ai(eps x) exp(-beta x^2) exp(i alpha x^2)`
/// at time t, pointwise. `beta = 0` is the plain Airy packet.
pub fn airy_family_at(eps: f64, beta: f64, alpha: f64, t: f64, x: f64) -> Complex64 {
    ComplexChirp::new(alpha, beta, t).airy(eps, x)
}

/// Chirped Gaussian `exp(-x^2 / (2 sigma^2)) exp(i alpha x^2)` at time t.
pub fn gaussian_at(sigma: f64, alpha: f64, t: f64, x: f64) -> Complex64 {
    ComplexChirp::new(alpha, 0.5 / (sigma * sigma), t).envelope(x)
}

/// `Ai[eps (x - eps^3 t^2 / 4)] exp[i (eps^3 t / 2)(x - eps^3 t^2 / 6)]`.
pub fn airy_exact(eps: f64, t: f64, grid: &Grid) -> Result<WaveField> {
    sample_with(grid, |x| Ok(airy_family_at(eps, 0.0, 0.0, t, x)))
}

pub fn airy_gauss_exact(eps: f64, beta: f64, t: f64, grid: &Grid) -> Result<WaveField> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "airy-gauss needs beta > 0, got {beta}"
        )));
    }
    sample_with(grid, |x| Ok(airy_family_at(eps, beta, 0.0, t, x)))
}

fn prefactor(c: &FactorCoeffs, x: f64) -> Complex64 {
    Complex64::from_polar(1.0 / c.s.sqrt(), c.f1 * x * x)
}

pub fn sinc_psi0_at(b: f64, c: &FactorCoeffs, x: f64) -> Complex64 {
    prefactor(c, x) * sinc::box_sinc(b, x / c.s)
}

/// Adds `i f4 p^2` acting on the profile, using the closed-form second
/// moment of the box kernel.
pub fn sinc_psi1_at(b: f64, c: &FactorCoeffs, x: f64) -> Complex64 {
    let y = x / c.s;
    prefactor(c, x) * (sinc::box_sinc(b, y) + I * c.f4 * sinc::second_moment(b, y) / b)
}

/// Same as [`sinc_psi1_at`] with the second moment integrated numerically.
pub fn sinc_psi1_quadrature_at(
    b: f64,
    c: &FactorCoeffs,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    let y = x / c.s;
    let moment = crate::specfun::quadrature::interval_integral(
        |u| Complex64::from_polar(u * u, u * y),
        -b,
        b,
        quad,
        "sinc second moment",
    )?;
    Ok(prefactor(c, x) * (sinc::box_sinc(b, y) + I * c.f4 * moment / b))
}

pub fn sinc_exact_at(b: f64, c: &FactorCoeffs, x: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    if c.f4 == 0.0 {
        return Ok(sinc_psi0_at(b, c, x));
    }
    Ok(prefactor(c, x) * sinc::chirped_kernel(b, x / c.s, c.f4, quad)? / b)
}

pub fn bessel_psi0_at(n: u32, c: &FactorCoeffs, x: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    Ok(prefactor(c, x) * bessel_jn_with(n as i64, x / c.s, quad)?)
}

/// `(1 + i f4 / 2) J_n - i (f4 / 4)(J_{n+2} + J_{n-2})` at `x / s`, from
/// `J_n'' = (J_{n-2} - 2 J_n + J_{n+2}) / 4`.
pub fn bessel_psi1_at(n: u32, c: &FactorCoeffs, x: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    let y = x / c.s;
    let n = n as i64;
    let j = bessel_jn_with(n, y, quad)?;
    if c.f4 == 0.0 {
        return Ok(prefactor(c, x) * j);
    }
    let side = bessel_jn_with(n + 2, y, quad)? + bessel_jn_with(n - 2, y, quad)?;
    let v = (1.0 + I * c.f4 / 2.0) * j - I * (c.f4 / 4.0) * side;
    Ok(prefactor(c, x) * v)
}

pub fn bessel_exact_at(n: u32, c: &FactorCoeffs, x: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    Ok(prefactor(c, x) * generalized_bessel_with(n as i64, x / c.s, c.f4, quad)?)
}

fn evolve_with<F>(
    state: &InitialState,
    alpha: f64,
    t: f64,
    grid: &Grid,
    method: Method,
    f: F,
) -> Result<EvolvedField>
where
    F: Fn(&FactorCoeffs, f64) -> Result<Complex64> + Sync,
{
    state.validate()?;
    let c = forward_coeffs(alpha, t)?;
    let field = sample_with(grid, |x| f(&c, x))?;
    Ok(EvolvedField::new(field, method, c, state))
}

pub fn sinc_psi0(b: f64, alpha: f64, t: f64, grid: &Grid) -> Result<EvolvedField> {
    evolve_with(&InitialState::Sinc { b }, alpha, t, grid, Method::Psi0, |c, x| {
        Ok(sinc_psi0_at(b, c, x))
    })
}

pub fn sinc_psi1(b: f64, alpha: f64, t: f64, grid: &Grid) -> Result<EvolvedField> {
    evolve_with(&InitialState::Sinc { b }, alpha, t, grid, Method::Psi1, |c, x| {
        Ok(sinc_psi1_at(b, c, x))
    })
}

pub fn sinc_exact(
    b: f64,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    let st = InitialState::Sinc { b };
    evolve_with(&st, alpha, t, grid, Method::ExactClosedForm, |c, x| {
        sinc_exact_at(b, c, x, quad)
    })
}

pub fn bessel_psi0(
    n: u32,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    evolve_with(&InitialState::Bessel { n }, alpha, t, grid, Method::Psi0, |c, x| {
        bessel_psi0_at(n, c, x, quad)
    })
}

pub fn bessel_psi1(
    n: u32,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    evolve_with(&InitialState::Bessel { n }, alpha, t, grid, Method::Psi1, |c, x| {
        bessel_psi1_at(n, c, x, quad)
    })
}

pub fn bessel_exact(
    n: u32,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    let st = InitialState::Bessel { n };
    evolve_with(&st, alpha, t, grid, Method::ExactClosedForm, |c, x| {
        bessel_exact_at(n, c, x, quad)
    })
}

/// Exact chirped evolution for every kind that has one.
pub fn exact_closed_form(
    state: &InitialState,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    let m = Method::ExactClosedForm;
    match *state {
        InitialState::Airy { eps } => evolve_with(state, alpha, t, grid, m, |_, x| {
            Ok(airy_family_at(eps, 0.0, alpha, t, x))
        }),
        InitialState::AiryGauss { eps, beta } => evolve_with(state, alpha, t, grid, m, |_, x| {
            Ok(airy_family_at(eps, beta, alpha, t, x))
        }),
        InitialState::Gaussian { sigma } => evolve_with(state, alpha, t, grid, m, |_, x| {
            Ok(gaussian_at(sigma, alpha, t, x))
        }),
        InitialState::Sinc { b } => sinc_exact(b, alpha, t, grid, quad),
        InitialState::Bessel { n } => bessel_exact(n, alpha, t, grid, quad),
        InitialState::Tabulated(_) => Err(Error::NoClosedForm(state.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::apply_chirp;
    use crate::gridfield::{make_grid, rel_l2_error};
    use crate::specfun::airy_ai;
    use crate::state::sample;

    #[test]
    fn airy_at_time_zero() {
        let g = make_grid(256, -15.0, 10.0).unwrap();
        let f = airy_exact(1.3, 0.0, &g).unwrap();
        for (x, v) in g.xs().zip(f.values()) {
            assert!((v.re - airy_ai(1.3 * x)).abs() < 1e-13);
            assert!(v.im.abs() < 1e-13);
        }
    }

    #[test]
    fn airy_gauss_at_time_zero() {
        let g = make_grid(256, -30.0, 30.0).unwrap();
        let f = airy_gauss_exact(1.0, 0.01, 0.0, &g).unwrap();
        for (x, v) in g.xs().zip(f.values()) {
            let want = airy_ai(x) * (-0.01 * x * x).exp();
            assert!((v - want).norm() < 1e-13);
        }
        assert!(airy_gauss_exact(1.0, 0.0, 1.0, &g).is_err());
    }

    #[test]
    fn every_path_reduces_to_chirped_profile_at_time_zero() {
        let q = QuadratureSpec::default();
        let g = make_grid(128, -12.0, 12.0).unwrap();
        for st in [
            InitialState::Sinc { b: 1.0 },
            InitialState::Bessel { n: 2 },
            InitialState::Airy { eps: 1.0 },
            InitialState::AiryGauss { eps: 1.0, beta: 0.1 },
            InitialState::Gaussian { sigma: 2.0 },
        ] {
            let want = apply_chirp(&sample(&st, &g, &q).unwrap(), 0.7);
            let got = exact_closed_form(&st, 0.7, 0.0, &g, &q).unwrap();
            assert!(rel_l2_error(&got.field, &want).unwrap() < 1e-12, "{st}");
        }
        let c = forward_coeffs(0.7, 0.0).unwrap();
        for x in [-3.0, 0.0, 2.5] {
            let p0 = bessel_psi0_at(1, &c, x, &q).unwrap();
            assert_eq!(bessel_psi1_at(1, &c, x, &q).unwrap(), p0);
            assert_eq!(sinc_psi1_at(1.0, &c, x), sinc_psi0_at(1.0, &c, x));
        }
    }

    #[test]
    fn sinc_second_moment_matches_quadrature() {
        let q = QuadratureSpec::default();
        let c = forward_coeffs(0.3, 5.0).unwrap();
        for x in [-7.0, -0.01, 0.0, 0.2, 3.0, 11.0] {
            let a = sinc_psi1_at(1.0, &c, x);
            let b = sinc_psi1_quadrature_at(1.0, &c, x, &q).unwrap();
            assert!((a - b).norm() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn sinc_exact_tends_to_psi0_for_large_alpha() {
        let q = QuadratureSpec::default();
        let g = make_grid(512, -40.0, 40.0).unwrap();
        for alpha in [10.0, 100.0] {
            let ex = sinc_exact(1.0, alpha, 5.0, &g, &q).unwrap();
            let p0 = sinc_psi0(1.0, alpha, 5.0, &g).unwrap();
            let bound = 4.0 * ex.coeffs.f4.abs() / 3.0;
            assert!(rel_l2_error(&p0.field, &ex.field).unwrap() <= bound);
        }
    }

    #[test]
    fn tabulated_has_no_closed_form() {
        let g = make_grid(16, -1.0, 1.0).unwrap();
        let st = InitialState::Tabulated(WaveField::zeros(g));
        let q = QuadratureSpec::default();
        assert!(matches!(
            exact_closed_form(&st, 0.0, 1.0, &g, &q),
            Err(Error::NoClosedForm(_))
        ));
    }
}
