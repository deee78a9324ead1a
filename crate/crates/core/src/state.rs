//! Initial profiles `phi(x, 0)` that can be evaluated at arbitrary x.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gridfield::{interp_cubic, Grid, WaveField};
use crate::specfun::{airy_ai, bessel_jn_with, sinc, QuadratureSpec};

/// |phi| falls below this outside `spatial_extent`, and spectral content
/// beyond `wavenumber_bound` is below it in relative amplitude.
const NEGLIGIBLE_LOG: f64 = 41.5; // ln(1e18)

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Airy { eps: f64 },
    AiryGauss { eps: f64, beta: f64 },
    Sinc { b: f64 },
    Bessel { n: u32 },
    Gaussian { sigma: f64 },
    Tabulated(WaveField),
}

impl InitialState {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            InitialState::Airy { eps } if !eps.is_finite() => bad(format!("eps {eps}")),
            InitialState::AiryGauss { eps, beta } => {
                if !eps.is_finite() {
                    bad(format!("eps {eps}"))
                } else if !(beta > 0.0 && beta.is_finite()) {
                    bad(format!("airy-gauss needs beta > 0, got {beta}"))
                } else {
                    Ok(())
                }
            }
            InitialState::Sinc { b } => sinc::check_width(b),
            InitialState::Gaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                bad(format!("gaussian needs sigma > 0, got {sigma}"))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64, quad: &QuadratureSpec) -> Result<Complex64> {
        let re = |v: f64| Complex64::new(v, 0.0);
        Ok(match self {
            InitialState::Airy { eps } => re(airy_ai(eps * x)),
            InitialState::AiryGauss { eps, beta } => re(airy_ai(eps * x) * (-beta * x * x).exp()),
            InitialState::Sinc { b } => re(sinc::box_sinc(*b, x)),
            InitialState::Bessel { n } => re(bessel_jn_with(*n as i64, x, quad)?),
            InitialState::Gaussian { sigma } => re((-x * x / (2.0 * sigma * sigma)).exp()),
            InitialState::Tabulated(f) => interp_cubic(f, x).unwrap_or_default(),
        })
    }

    /// Half-width outside of which |phi| is negligible, for states that decay.
    pub fn spatial_extent(&self) -> Option<f64> {
        match self {
            InitialState::AiryGauss { beta, .. } => Some((NEGLIGIBLE_LOG / beta).sqrt()),
            InitialState::Gaussian { sigma } => Some(sigma * (2.0 * NEGLIGIBLE_LOG).sqrt()),
            InitialState::Tabulated(f) => Some(f.grid().max_abs_x()),
            _ => None,
        }
    }

    /// Bound on |k| for the content of phi restricted to |x| <= reach.
    pub fn wavenumber_bound(&self, reach: f64) -> f64 {
        match self {
            InitialState::Airy { eps } => airy_local_k(*eps, reach),
            InitialState::AiryGauss { eps, beta } => {
                let reach = reach.min(self.spatial_extent().unwrap_or(reach));
                airy_local_k(*eps, reach) + (4.0 * beta * NEGLIGIBLE_LOG).sqrt()
            }
            InitialState::Sinc { b } => *b,
            InitialState::Bessel { .. } => 1.0,
            InitialState::Gaussian { sigma } => (2.0 * NEGLIGIBLE_LOG).sqrt() / sigma,
            InitialState::Tabulated(f) => f.grid().nyquist(),
        }
    }
}

fn airy_local_k(eps: f64, reach: f64) -> f64 {
    let e = eps.abs();
    e * (e * reach).sqrt() + 2.0 * e
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Airy { eps } => write!(f, "airy:{eps}"),
            InitialState::AiryGauss { eps, beta } => write!(f, "airygauss:{eps},{beta}"),
            InitialState::Sinc { b } => write!(f, "sinc:{b}"),
            InitialState::Bessel { n } => write!(f, "bessel:{n}"),
            InitialState::Gaussian { sigma } => write!(f, "gauss:{sigma}"),
            InitialState::Tabulated(field) => write!(f, "tabulated:{}", field.grid().n()),
        }
    }
}

/// Parses `airy:<eps>`, `airygauss:<eps>,<beta>`, `sinc:<b>`, `bessel:<n>`
/// and `gauss:<sigma>`.
impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse state '{s}'"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<&str> = args.split(',').map(str::trim).collect();
        let real = |i: usize| -> Result<f64> {
            nums.get(i)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(bad)
        };
        let arity = |k: usize| if nums.len() == k { Ok(()) } else { Err(bad()) };
        let state = match kind.trim().to_ascii_lowercase().as_str() {
            "airy" => {
                arity(1)?;
                InitialState::Airy { eps: real(0)? }
            }
            "airygauss" => {
                arity(2)?;
                InitialState::AiryGauss {
                    eps: real(0)?,
                    beta: real(1)?,
                }
            }
            "sinc" => {
                arity(1)?;
                InitialState::Sinc { b: real(0)? }
            }
            "bessel" => {
                arity(1)?;
                InitialState::Bessel {
                    n: nums[0].parse().map_err(|_| bad())?,
                }
            }
            "gauss" | "gaussian" => {
                arity(1)?;
                InitialState::Gaussian { sigma: real(0)? }
            }
            _ => return Err(bad()),
        };
        state.validate()?;
        Ok(state)
    }
}

/// `values[j] = phi(x_j)`.
pub fn sample(state: &InitialState, grid: &Grid, quad: &QuadratureSpec) -> Result<WaveField> {
    sample_with(grid, |x| state.eval(x, quad))
}

/// Evaluates `f` at every grid point, in parallel, preserving order.
pub fn sample_with<F>(grid: &Grid, f: F) -> Result<WaveField>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let xs: Vec<f64> = grid.xs().collect();
    let values = xs.par_iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    WaveField::new(*grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridfield::make_grid;

    #[test]
    fn parses_grammar() {
        assert_eq!("airy:1".parse::<InitialState>().unwrap(), InitialState::Airy { eps: 1.0 });
        assert_eq!(
            "airygauss:1,0.01".parse::<InitialState>().unwrap(),
            InitialState::AiryGauss { eps: 1.0, beta: 0.01 }
        );
        assert_eq!("sinc:2".parse::<InitialState>().unwrap(), InitialState::Sinc { b: 2.0 });
        assert_eq!("bessel:3".parse::<InitialState>().unwrap(), InitialState::Bessel { n: 3 });
        assert_eq!(
            "gauss:0.5".parse::<InitialState>().unwrap(),
            InitialState::Gaussian { sigma: 0.5 }
        );
        for bad in ["", "airy", "sinc:0", "sinc:-1", "bessel:-1", "bessel:1.5", "airygauss:1",
                    "airygauss:1,0", "foo:1", "sinc:1,2"] {
            assert!(bad.parse::<InitialState>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["airy:1", "airygauss:1,0.01", "sinc:1", "bessel:0", "gauss:2"] {
            let st: InitialState = s.parse().unwrap();
            assert_eq!(st.to_string(), s);
        }
    }

    #[test]
    fn sample_examples() {
        let q = QuadratureSpec::default();
        let g = make_grid(16, -4.0, 4.0).unwrap();
        let j0 = sample(&InitialState::Bessel { n: 0 }, &g, &q).unwrap();
        assert!((j0.values()[8].re - 1.0).abs() < 1e-15);
        let sc = sample(&InitialState::Sinc { b: 1.0 }, &g, &q).unwrap();
        assert_eq!(sc.values()[8].re, 2.0);
        let ai = sample(&InitialState::Airy { eps: 1.0 }, &g, &q).unwrap();
        assert!((ai.values()[8].re - 0.355_028_053_887_817_2).abs() < 1e-15);
    }

    #[test]
    fn sample_is_pure() {
        let q = QuadratureSpec::default();
        let g = make_grid(256, -20.0, 20.0).unwrap();
        for st in [InitialState::Bessel { n: 2 }, InitialState::AiryGauss { eps: 1.0, beta: 0.01 }] {
            let a = sample(&st, &g, &q).unwrap();
            let b = sample(&st, &g, &q).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn tabulated_reproduces_knots_and_vanishes_outside() {
        let q = QuadratureSpec::default();
        let g = make_grid(64, -2.0, 2.0).unwrap();
        let f = WaveField::from_fn(g, |x| Complex64::new(x.cos(), x)).unwrap();
        let st = InitialState::Tabulated(f.clone());
        for j in [0, 5, 63] {
            assert_eq!(st.eval(g.x(j), &q).unwrap(), f.values()[j]);
        }
        assert_eq!(st.eval(5.0, &q).unwrap(), Complex64::new(0.0, 0.0));
    }
}
