//! Coefficients of the three-factor split
//! `exp(-i t p^2/2) exp(i a x^2) = exp(i f1 x^2) exp(i f2 (xp+px)) exp(i f4 p^2)`,
//! the chirp, and the squeeze `psi(x) -> s^{-1/2} psi(x/s)`.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gridfield::{interp_cubic, Grid, WaveField};
use crate::specfun::QuadratureSpec;
use crate::state::{sample_with, InitialState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorCoeffs {
    pub alpha: f64,
    pub t: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    /// Squeeze scale `1 + 2 alpha t`.
    pub s: f64,
}

/// Accepts any `(alpha, t)` with `1 + 2 alpha t > 0`.
pub fn factor_coeffs(alpha: f64, t: f64) -> Result<FactorCoeffs> {
    if !(alpha.is_finite() && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha={alpha}, t={t}")));
    }
    let s = 1.0 + 2.0 * alpha * t;
    if !(s > 0.0) {
        return Err(Error::FactorizationSingular { alpha, t, value: s });
    }
    let f3 = alpha * t * t / s;
    Ok(FactorCoeffs {
        alpha,
        t,
        f1: alpha / s,
        f2: -0.5 * s.ln(),
        f3,
        f4: f3 - t / 2.0,
        s,
    })
}

/// The forward-evolution API only covers `alpha >= 0, t >= 0`.
pub fn forward_coeffs(alpha: f64, t: f64) -> Result<FactorCoeffs> {
    if !(alpha >= 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "forward evolution needs alpha >= 0 and t >= 0, got alpha={alpha}, t={t}"
        )));
    }
    factor_coeffs(alpha, t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F4Asymptotics {
    /// `-t/2 + t^2 a - 2 t^3 a^2`
    pub small_alpha: f64,
    /// `-1/(4a) + 1/(8 t a^2)`; `None` at `a = 0`.
    pub large_alpha: Option<f64>,
}

pub fn f4_asymptotics(alpha: f64, t: f64) -> F4Asymptotics {
    let small_alpha = -t / 2.0 + t * t * alpha - 2.0 * t * t * t * alpha * alpha;
    let large_alpha = (alpha != 0.0)
        .then(|| -1.0 / (4.0 * alpha) + 1.0 / (8.0 * t * alpha * alpha));
    F4Asymptotics {
        small_alpha,
        large_alpha,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct F4Row {
    pub t: f64,
    pub f4_exact: f64,
    pub f4_small_alpha: f64,
    pub f4_large_alpha: f64,
}

pub fn f4_sweep(alpha: f64, times: &[f64]) -> Result<Vec<F4Row>> {
    times
        .iter()
        .map(|&t| {
            let c = factor_coeffs(alpha, t)?;
            let a = f4_asymptotics(alpha, t);
            Ok(F4Row {
                t,
                f4_exact: c.f4,
                f4_small_alpha: a.small_alpha,
                f4_large_alpha: a.large_alpha.unwrap_or(f64::NAN),
            })
        })
        .collect()
}

pub fn write_f4_csv<W: Write>(rows: &[F4Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "f4_exact", "f4_small_alpha", "f4_large_alpha"])?;
    for r in rows {
        w.write_record([
            r.t.to_string(),
            r.f4_exact.to_string(),
            r.f4_small_alpha.to_string(),
            r.f4_large_alpha.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `values[j] *= exp(i c x_j^2)`.
pub fn apply_chirp(f: &WaveField, c: f64) -> WaveField {
    if c == 0.0 {
        return f.clone();
    }
    let grid = *f.grid();
    let values = grid
        .xs()
        .zip(f.values())
        .map(|(x, v)| v * Complex64::from_polar(1.0, c * x * x))
        .collect();
    WaveField::new(grid, values).expect("chirp keeps samples finite")
}

fn check_scale(s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("squeeze scale must be > 0, got {s}")));
    }
    Ok(())
}

/// `s^{-1/2} phi(x_j / s)` with phi evaluated analytically.
pub fn squeeze_scale_analytic(
    state: &InitialState,
    s: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<WaveField> {
    check_scale(s)?;
    let amp = 1.0 / s.sqrt();
    sample_with(grid, |x| Ok(amp * state.eval(x / s, quad)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledSqueeze {
    pub field: WaveField,
    /// Fraction of target points whose source `x_j/s` lies inside the grid.
    pub coverage: f64,
}

/// Squeeze of tabulated data by cubic interpolation; sources outside the
/// grid are zero-filled and counted against `coverage`.
pub fn squeeze_scale_sampled(f: &WaveField, s: f64) -> Result<SampledSqueeze> {
    check_scale(s)?;
    let grid = *f.grid();
    let amp = 1.0 / s.sqrt();
    let mut covered = 0usize;
    let values = grid
        .xs()
        .map(|x| match interp_cubic(f, x / s) {
            Some(v) => {
                covered += 1;
                v * amp
            }
            None => Complex64::new(0.0, 0.0),
        })
        .collect();
    Ok(SampledSqueeze {
        field: WaveField::new(grid, values)?,
        coverage: covered as f64 / grid.n() as f64,
    })
}
