//! FFT plumbing shared by the spectral propagator and the spectral
//! derivative used by the first-order approximant.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::gridfield::{Grid, WaveField};

/// Fraction of |k| above which spectral content counts as "near Nyquist".
pub const GUARD_BAND: f64 = 0.9;
/// Largest allowed share of spectral mass inside the guard band.
pub const GUARD_MASS: f64 = 1e-8;

pub fn forward(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

pub fn inverse(spectrum: &[Complex64]) -> Vec<Complex64> {
    let mut buf = spectrum.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Share of `sum |F(k)|^2` carried by wavenumbers with |k| above
/// `GUARD_BAND * nyquist`.
pub fn guard_band_fraction(grid: &Grid, spectrum: &[Complex64]) -> f64 {
    let cutoff = GUARD_BAND * grid.nyquist();
    let mut total = 0.0;
    let mut high = 0.0;
    for (j, v) in spectrum.iter().enumerate() {
        let m = v.norm_sqr();
        total += m;
        if grid.k(j).abs() > cutoff {
            high += m;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        high / total
    }
}

/// Checks the band-limit guard and returns the spectrum on success.
pub fn guarded_spectrum(field: &WaveField) -> Result<Vec<Complex64>> {
    let spectrum = forward(field.values());
    let frac = guard_band_fraction(field.grid(), &spectrum);
    if frac > GUARD_MASS {
        return Err(Error::Aliasing(format!(
            "spectral mass fraction {frac:.3e} above {GUARD_BAND}*k_nyquist \
             (limit {GUARD_MASS:e}) on grid n={} [{}, {})",
            field.grid().n(),
            field.grid().x_min(),
            field.grid().x_max()
        )));
    }
    Ok(spectrum)
}

/// Multiplies the spectrum by `m(k)` and transforms back.
pub fn apply_multiplier(field: &WaveField, m: impl Fn(f64) -> Complex64) -> Result<WaveField> {
    let mut spectrum = guarded_spectrum(field)?;
    let grid = *field.grid();
    for (j, v) in spectrum.iter_mut().enumerate() {
        *v *= m(grid.k(j));
    }
    WaveField::new(grid, inverse(&spectrum))
}

/// `p^2 f = -f''`, computed spectrally.
pub fn p_squared(field: &WaveField) -> Result<WaveField> {
    apply_multiplier(field, |k| Complex64::new(k * k, 0.0))
}
