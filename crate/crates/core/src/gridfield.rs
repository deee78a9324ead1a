//! Uniform grids, sampled complex fields, norms and error metrics.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Endpoint-exclusive uniform lattice `x_j = x_min + j*dx`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    n: usize,
    x_min: f64,
    x_max: f64,
    #[serde(skip)]
    dx: f64,
}

impl Grid {
    pub fn new(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        check_count(n)?;
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "need finite x_max > x_min, got [{x_min}, {x_max})"
            )));
        }
        Ok(Grid {
            n,
            x_min,
            x_max,
            dx: (x_max - x_min) / n as f64,
        })
    }

    /// Grid with a prescribed spacing, so that points of another grid can be
    /// made to coincide exactly with knots of this one.
    pub fn with_spacing(n: usize, x_min: f64, dx: f64) -> Result<Self> {
        check_count(n)?;
        if !(dx.is_finite() && dx > 0.0 && x_min.is_finite()) {
            return Err(Error::InvalidGrid(format!("bad spacing {dx}")));
        }
        Ok(Grid {
            n,
            x_min,
            x_max: x_min + n as f64 * dx,
            dx,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn xs(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.x(j))
    }

    /// Largest |x| over the sample points.
    pub fn max_abs_x(&self) -> f64 {
        self.x_min.abs().max(self.x(self.n - 1).abs())
    }

    /// Conjugate wavenumber in standard DFT ordering.
    pub fn k(&self, j: usize) -> f64 {
        let dk = 2.0 * PI / (self.n as f64 * self.dx);
        let m = if j < self.n / 2 {
            j as f64
        } else {
            j as f64 - self.n as f64
        };
        m * dk
    }

    pub fn ks(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.k(j)).collect()
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.dx
    }
}

/// The default experiment lattice: 8192 points on [-80, 80).
pub fn default_grid() -> Grid {
    Grid::new(8192, -80.0, 80.0).expect("default grid is valid")
}

pub fn make_grid(n: usize, x_min: f64, x_max: f64) -> Result<Grid> {
    Grid::new(n, x_min, x_max)
}

fn check_count(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidGrid(format!(
            "sample count must be a power of two >= 2, got {n}"
        )));
    }
    Ok(())
}

/// Complex samples of a wavefunction on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl WaveField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.n()
            )));
        }
        if let Some(j) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "non-finite sample at x = {}",
                grid.x(j)
            )));
        }
        Ok(WaveField { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        WaveField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.xs().map(f).collect();
        WaveField::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn scaled(&self, c: Complex64) -> WaveField {
        WaveField {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        l2_norm(self)
    }

    pub fn density(&self) -> Vec<f64> {
        density(self)
    }

    /// Writes the field as CSV with columns `x, re, im, density`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "re", "im", "density"])?;
        for (x, v) in self.grid.xs().zip(&self.values) {
            w.write_record([
                x.to_string(),
                v.re.to_string(),
                v.im.to_string(),
                v.norm_sqr().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Four-point Lagrange interpolation at `x`. Returns `None` outside
/// `[x_min, x_last]`. Exact at knots.
pub fn interp_cubic(f: &WaveField, x: f64) -> Option<Complex64> {
    let g = f.grid();
    let n = g.n();
    let u = (x - g.x_min()) / g.dx();
    let last = (n - 1) as f64;
    if !(u >= -1e-9 && u <= last + 1e-9) {
        return None;
    }
    let nearest = u.round();
    if (u - nearest).abs() < 1e-9 {
        return Some(f.values()[nearest as usize]);
    }
    if n < 4 {
        let j = (u.floor() as usize).min(n - 2);
        let r = u - j as f64;
        return Some(f.values()[j] * (1.0 - r) + f.values()[j + 1] * r);
    }
    let j0 = (u.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..4 {
        let mut w = 1.0;
        for b in 0..4 {
            if a != b {
                w *= (u - (j0 + b) as f64) / (a as f64 - b as f64);
            }
        }
        acc += f.values()[j0 + a] * w;
    }
    Some(acc)
}

pub fn l2_norm(f: &WaveField) -> f64 {
    let sum: f64 = f.values.iter().map(|v| v.norm_sqr()).sum();
    (sum * f.grid.dx()).sqrt()
}

pub fn density(f: &WaveField) -> Vec<f64> {
    f.values.iter().map(|v| v.norm_sqr()).collect()
}

/// `||a - b|| / ||b||`; `b` is the reference.
pub fn rel_l2_error(a: &WaveField, b: &WaveField) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let reference = l2_norm(b);
    if reference == 0.0 {
        return Err(Error::ZeroReference);
    }
    let diff: f64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    Ok((diff * a.grid.dx()).sqrt() / reference)
}

/// Largest pointwise difference of the densities of two fields.
pub fn density_sup_error(a: &WaveField, b: &WaveField) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x.norm_sqr() - y.norm_sqr()).abs())
        .fold(0.0, f64::max))
}
