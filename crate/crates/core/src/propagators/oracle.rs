//! Spectral propagation: the free step `exp(-i t p^2 / 2)`, the chirped
//! oracle, and the factorized pipeline `chirp(f1) . squeeze(s) . exp(i f4 p^2)`
//! evaluated numerically.
//!
//! The output grid only fixes where results are sampled. Both pipelines work
//! on their own power-of-two lattice, chosen so that every output point is
//! a knot, the chirp is resolved, and the evolved packet does not wrap
//! around the periodic box. States that do not decay (Sinc, Bessel, Airy)
//! are rolled off with a smooth erfc taper placed beyond the region that can
//! reach the output window within time t.

use num_complex::Complex64;
use statrs::function::erf::erfc;

use super::{EvolvedField, Method};
use crate::error::{Error, Result};
use crate::factorization::{apply_chirp, forward_coeffs, FactorCoeffs};
use crate::gridfield::{Grid, WaveField};
use crate::specfun::QuadratureSpec;
use crate::spectral::{apply_multiplier, GUARD_BAND};
use crate::state::{sample, sample_with, InitialState};

/// Largest internal lattice the oracle will build.
pub const MAX_INTERNAL_POINTS: usize = 1 << 24;

/// Taper widths tried when planning; the cheapest lattice wins.
const TAPER_WIDTHS: [f64; 7] = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
/// Spectral reach of an erfc ramp of width w is about this over w.
const TAPER_REACH: f64 = 12.0;
/// Ramp centre sits this many widths outside the flat region.
const TAPER_OFFSET: f64 = 6.0;

/// `psi_hat(k) *= exp(-i t k^2 / 2)`.
pub fn spectral_free_step(f: &WaveField, t: f64) -> Result<WaveField> {
    if t == 0.0 {
        return Ok(f.clone());
    }
    apply_multiplier(f, |k| Complex64::from_polar(1.0, -0.5 * t * k * k))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Taper {
    flat_lo: f64,
    flat_hi: f64,
    width: f64,
}

impl Taper {
    fn weight(&self, y: f64) -> f64 {
        let w = self.width;
        let hi = 0.5 * erfc((y - (self.flat_hi + TAPER_OFFSET * w)) / w);
        let lo = 0.5 * erfc(((self.flat_lo - TAPER_OFFSET * w) - y) / w);
        hi * lo
    }
}

/// Which part of phi the spectral pipelines see.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePlan {
    lo: f64,
    hi: f64,
    taper: Option<Taper>,
    k_eff: f64,
}

impl SourcePlan {
    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn taper_width(&self) -> Option<f64> {
        self.taper.map(|t| t.width)
    }

    fn reach(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    fn eval(&self, state: &InitialState, y: f64, quad: &QuadratureSpec) -> Result<Complex64> {
        if y <= self.lo || y >= self.hi {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let w = self.taper.map_or(1.0, |t| t.weight(y));
        Ok(state.eval(y, quad)? * w)
    }

    /// Lattice for chirp-then-free-step whose knots include the window grid.
    fn oracle_lattice(&self, c: &FactorCoeffs, window: &Grid) -> Option<(Grid, usize, usize)> {
        let kmax = 2.0 * c.alpha * self.reach() + self.k_eff;
        let mut stride = 1usize;
        while kmax >= GUARD_BAND * std::f64::consts::PI * stride as f64 / window.dx() {
            stride *= 2;
            if stride > MAX_INTERNAL_POINTS {
                return None;
            }
        }
        let dx = window.dx() / stride as f64;
        let a = window.x_min();
        let b = window.x(window.n() - 1);
        let spread = c.t * self.k_eff;
        let lo = (c.s * self.lo - spread).min(self.lo).min(a);
        let hi = (c.s * self.hi + spread).max(self.hi).max(b);
        lattice_around(a, dx, lo, hi).map(|(g, pad)| (g, pad, stride))
    }

    /// Lattice for `exp(i f4 p^2)` on phi, spacing `dx/s`, so that `x_j/s`
    /// are knots.
    fn factor_lattice(&self, c: &FactorCoeffs, window: &Grid) -> Option<(Grid, usize)> {
        let dx = window.dx() / c.s;
        let a = window.x_min() / c.s;
        let b = window.x(window.n() - 1) / c.s;
        let spread = (c.t / c.s) * self.k_eff;
        let lo = (self.lo - spread).min(a);
        let hi = (self.hi + spread).max(b);
        lattice_around(a, dx, lo, hi)
    }
}

/// Power-of-two lattice with spacing `dx`, a knot at `anchor`, covering
/// `[lo, hi]`. Returns the grid and the index of `anchor`.
fn lattice_around(anchor: f64, dx: f64, lo: f64, hi: f64) -> Option<(Grid, usize)> {
    let pad = ((anchor - lo) / dx).ceil().max(0.0) as usize + 1;
    let span = pad + ((hi - anchor) / dx).ceil().max(0.0) as usize + 2;
    let n = span.checked_next_power_of_two()?.max(2);
    if n > MAX_INTERNAL_POINTS {
        return None;
    }
    let grid = Grid::with_spacing(n, anchor - pad as f64 * dx, dx).ok()?;
    Some((grid, pad))
}

/// Chooses support and taper for evolving `state` into `window`.
pub fn plan_source(
    state: &InitialState,
    c: &FactorCoeffs,
    window: &Grid,
) -> Result<SourcePlan> {
    let a = window.x_min();
    let b = window.x(window.n() - 1);
    let mut candidates = Vec::new();

    if let Some(extent) = state.spatial_extent() {
        candidates.push(SourcePlan {
            lo: -extent,
            hi: extent,
            taper: None,
            k_eff: state.wavenumber_bound(extent),
        });
    }
    for &w in &TAPER_WIDTHS {
        let mut reach = a.abs().max(b.abs()) / c.s;
        let mut plan = None;
        for _ in 0..6 {
            let k = state.wavenumber_bound(reach);
            let k_taper = k + TAPER_REACH / w;
            let flat_lo = (a - c.t * k_taper) / c.s;
            let flat_hi = (b + c.t * k_taper) / c.s;
            let margin = 2.0 * TAPER_OFFSET * w;
            let p = SourcePlan {
                lo: flat_lo - margin,
                hi: flat_hi + margin,
                taper: Some(Taper {
                    flat_lo,
                    flat_hi,
                    width: w,
                }),
                k_eff: k_taper,
            };
            let new_reach = p.reach();
            plan = Some(p);
            if new_reach <= reach * (1.0 + 1e-12) {
                break;
            }
            reach = new_reach;
        }
        candidates.extend(plan);
    }

    candidates
        .into_iter()
        .filter_map(|p| p.oracle_lattice(c, window).map(|(g, _, _)| (g.n(), p)))
        .min_by(|x, y| x.0.cmp(&y.0))
        .map(|(_, p)| p)
        .ok_or_else(|| {
            Error::Aliasing(format!(
                "no internal lattice up to {MAX_INTERNAL_POINTS} points resolves \
                 alpha={} t={} for {state}",
                c.alpha, c.t
            ))
        })
}

/// Free evolution of the chirped state, computed spectrally. The reference
/// for every other path.
pub fn chirped_oracle(
    state: &InitialState,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    state.validate()?;
    let coeffs = forward_coeffs(alpha, t)?;
    let field = if t == 0.0 {
        apply_chirp(&sample(state, grid, quad)?, alpha)
    } else {
        let plan = plan_source(state, &coeffs, grid)?;
        let (lattice, pad, stride) = plan
            .oracle_lattice(&coeffs, grid)
            .ok_or_else(|| Error::Aliasing("oracle lattice too large".into()))?;
        let phi = sample_with(&lattice, |y| plan.eval(state, y, quad))?;
        let evolved = spectral_free_step(&apply_chirp(&phi, alpha), t)?;
        let values = (0..grid.n())
            .map(|j| evolved.values()[pad + j * stride])
            .collect();
        WaveField::new(*grid, values)?
    };
    Ok(EvolvedField::new(field, Method::Oracle, coeffs, state))
}

/// `chirp(f1) . squeeze(s) . exp(i f4 p^2)` applied to phi, with the last
/// factor done spectrally. Exact operator algebra, so it must agree with
/// [`chirped_oracle`].
pub fn factorized_evolution(
    state: &InitialState,
    alpha: f64,
    t: f64,
    grid: &Grid,
    quad: &QuadratureSpec,
) -> Result<EvolvedField> {
    state.validate()?;
    let coeffs = forward_coeffs(alpha, t)?;
    let field = if t == 0.0 {
        apply_chirp(&sample(state, grid, quad)?, alpha)
    } else {
        let plan = plan_source(state, &coeffs, grid)?;
        let (lattice, pad) = plan
            .factor_lattice(&coeffs, grid)
            .ok_or_else(|| Error::Aliasing("factor lattice too large".into()))?;
        let phi = sample_with(&lattice, |y| plan.eval(state, y, quad))?;
        let f4 = coeffs.f4;
        let spread = apply_multiplier(&phi, |k| Complex64::from_polar(1.0, f4 * k * k))?;
        let amp = 1.0 / coeffs.s.sqrt();
        let values = (0..grid.n())
            .map(|j| spread.values()[pad + j] * amp)
            .collect();
        apply_chirp(&WaveField::new(*grid, values)?, coeffs.f1)
    };
    Ok(EvolvedField::new(field, Method::Factorized, coeffs, state))
}
