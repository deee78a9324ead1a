//! Structure-invariant approximants: drop `exp(i f4 p^2)` entirely (psi0)
//! or keep its first Taylor term (psi1).

use num_complex::Complex64;
use statrs::function::erf::erfc;

use super::closed_form::{bessel_psi1, sinc_psi1};
use super::{EvolvedField, Method};
use crate::error::Result;
use crate::factorization::{
    apply_chirp, forward_coeffs, squeeze_scale_analytic, squeeze_scale_sampled, FactorCoeffs,
};
use crate::gridfield::{Grid, WaveField};
use crate::specfun::QuadratureSpec;
use crate::spectral::p_squared;
use crate::state::{sample_with, InitialState};

/// `s^{-1/2} exp(i f1 x^2) phi(x / s)`.
pub fn psi0(
    state: &InitialState,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    state.validate()?;
    let c = forward_coeffs(alpha, t)?;
    let squeezed = match state {
        InitialState::Tabulated(f) if *f.grid() == *grid => squeeze_scale_sampled(f, c.s)?.field,
        _ => squeeze_scale_analytic(state, c.s, grid, quad)?,
    };
    Ok(EvolvedField::new(apply_chirp(&squeezed, c.f1), Method::Psi0, c, state))
}

/// psi0 at a single point.
pub fn psi0_at(state: &InitialState, c: &FactorCoeffs, x: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    Ok(Complex64::from_polar(1.0 / c.s.sqrt(), c.f1 * x * x) * state.eval(x / c.s, quad)?)
}

/// psi1 with `p^2 phi` computed spectrally.
///
/// phi is sampled at spacing `dx / s`, so the target points `x_j / s` are
/// knots, on a lattice twice as long as the window. The half-window of
/// padding on each side carries a smooth erfc roll-off that is flat over
/// the window itself, which makes the periodic derivative clean there.
pub fn psi1_generic(
    state: &InitialState,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    let base = psi0(state, alpha, t, grid, quad)?;
    let c = base.coeffs;
    if c.f4 == 0.0 {
        return Ok(base.with_method(Method::Psi1));
    }
    let n = grid.n();
    let pad = n / 2;
    let dx = grid.dx() / c.s;
    let lo = grid.x_min() / c.s;
    let hi = grid.x(n - 1) / c.s;
    let lattice = Grid::with_spacing(2 * n, lo - pad as f64 * dx, dx)?;
    let w = pad as f64 * dx / 12.0;
    let roll = |y: f64| {
        0.25 * erfc((y - (hi + 6.0 * w)) / w) * erfc(((lo - 6.0 * w) - y) / w)
    };
    let phi = sample_with(&lattice, |y| Ok(state.eval(y, quad)? * roll(y)))?;
    let p2 = p_squared(&phi)?;
    let amp = 1.0 / c.s.sqrt();
    let values = grid
        .xs()
        .zip(base.field.values())
        .enumerate()
        .map(|(j, (x, v0))| {
            let correction = p2.values()[pad + j] * Complex64::from_polar(amp, c.f1 * x * x);
            v0 + Complex64::i() * c.f4 * correction
        })
        .collect();
    let field = WaveField::new(*grid, values)?;
    Ok(EvolvedField::new(field, Method::Psi1, c, state))
}

/// psi1 through the closed forms where they exist, spectral otherwise.
pub fn psi1(
    state: &InitialState,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    match *state {
        InitialState::Sinc { b } => {
            state.validate()?;
            sinc_psi1(b, alpha, t, grid)
        }
        InitialState::Bessel { n } => bessel_psi1(n, alpha, t, grid, quad),
        _ => psi1_generic(state, alpha, t, grid, quad),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::apply_chirp;
    use crate::gridfield::{make_grid, rel_l2_error};
    use crate::state::sample;

    #[test]
    fn psi0_at_time_zero_is_initial_condition() {
        let q = QuadratureSpec::default();
        let g = make_grid(256, -20.0, 20.0).unwrap();
        let st = InitialState::Sinc { b: 1.0 };
        let p = psi0(&st, 0.4, 0.0, &g, &q).unwrap();
        assert_eq!(p.field, apply_chirp(&sample(&st, &g, &q).unwrap(), 0.4));
        let p1 = psi1_generic(&st, 0.4, 0.0, &g, &q).unwrap();
        assert_eq!(p1.field, p.field);
        assert_eq!(p1.method, Method::Psi1);
    }

    #[test]
    fn psi0_density_is_rescaled_initial_density() {
        let q = QuadratureSpec::default();
        let g = make_grid(512, -30.0, 30.0).unwrap();
        let st = InitialState::Bessel { n: 1 };
        let p = psi0(&st, 1.0, 2.0, &g, &q).unwrap();
        let s = p.coeffs.s;
        for (x, d) in g.xs().zip(p.field.density()) {
            let phi = st.eval(x / s, &q).unwrap();
            assert!((s * d - phi.norm_sqr()).abs() < 1e-14);
        }
    }

    #[test]
    fn pointwise_matches_field() {
        let q = QuadratureSpec::default();
        let g = make_grid(64, -5.0, 5.0).unwrap();
        let st = InitialState::Gaussian { sigma: 1.5 };
        let p = psi0(&st, 0.5, 3.0, &g, &q).unwrap();
        for (x, v) in g.xs().zip(p.field.values()) {
            assert!((psi0_at(&st, &p.coeffs, x, &q).unwrap() - v).norm() < 1e-15);
        }
    }

    #[test]
    fn generic_psi1_matches_sinc_closed_form() {
        let q = QuadratureSpec::default();
        let g = make_grid(2048, -40.0, 40.0).unwrap();
        let st = InitialState::Sinc { b: 1.0 };
        for alpha in [0.3, 3.0] {
            let a = psi1_generic(&st, alpha, 5.0, &g, &q).unwrap();
            let b = psi1(&st, alpha, 5.0, &g, &q).unwrap();
            assert!(rel_l2_error(&a.field, &b.field).unwrap() <= 1e-8, "alpha={alpha}");
        }
    }

    #[test]
    fn generic_psi1_matches_bessel_closed_form() {
        let q = QuadratureSpec::default();
        let g = make_grid(2048, -40.0, 40.0).unwrap();
        let st = InitialState::Bessel { n: 0 };
        let a = psi1_generic(&st, 0.5, 5.0, &g, &q).unwrap();
        let b = psi1(&st, 0.5, 5.0, &g, &q).unwrap();
        assert!(rel_l2_error(&a.field, &b.field).unwrap() <= 1e-8);
    }
}
