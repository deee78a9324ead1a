//! Composite quadrature with panel doubling.
//!
//! `panel_count` is the number of integrand evaluations at the first level.
//! Each refinement doubles it until two successive estimates differ by less
//! than `abs_tol`, or `MAX_PANELS` is exceeded.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_PANELS: usize = 1 << 16;
pub const MIN_PANELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    Trapezoid,
    GaussLegendre { order: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub panel_count: usize,
    /// Rule for finite, non-periodic intervals. Periodic integrals over a
    /// full period always use the trapezoid rule, which is spectrally
    /// accurate there.
    pub rule: QuadratureRule,
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            panel_count: 512,
            rule: QuadratureRule::GaussLegendre { order: 8 },
            abs_tol: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn new(panel_count: usize, rule: QuadratureRule, abs_tol: f64) -> Result<Self> {
        let spec = QuadratureSpec {
            panel_count,
            rule,
            abs_tol,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.panel_count < MIN_PANELS || self.panel_count > MAX_PANELS {
            return Err(Error::InvalidParameter(format!(
                "panel_count must be in [{MIN_PANELS}, {MAX_PANELS}], got {}",
                self.panel_count
            )));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if let QuadratureRule::GaussLegendre { order } = self.rule {
            if !(1..=64).contains(&order) {
                return Err(Error::InvalidParameter(format!(
                    "Gauss-Legendre order must be in 1..=64, got {order}"
                )));
            }
        }
        Ok(())
    }

    pub fn with_panels(mut self, panel_count: usize) -> Result<Self> {
        self.panel_count = panel_count;
        self.validate()?;
        Ok(self)
    }
}

/// `(1/2pi) * integral over [-pi, pi) of f`, trapezoid with doubling.
pub fn periodic_mean(
    f: impl Fn(f64) -> Complex64,
    spec: &QuadratureSpec,
    what: &'static str,
) -> Result<Complex64> {
    let mut n = spec.panel_count;
    let mut sum: Complex64 = (0..n).map(|j| f(-PI + 2.0 * PI * j as f64 / n as f64)).sum();
    let mut estimate = sum / n as f64;
    let mut diff = f64::INFINITY;
    while 2 * n <= MAX_PANELS {
        let h = 2.0 * PI / n as f64;
        let mid: Complex64 = (0..n).map(|j| f(-PI + (j as f64 + 0.5) * h)).sum();
        sum += mid;
        n *= 2;
        let refined = sum / n as f64;
        diff = (refined - estimate).norm();
        estimate = refined;
        if diff < spec.abs_tol {
            return Ok(estimate);
        }
    }
    Err(Error::QuadratureNotConverged {
        what,
        diff,
        panels: n,
    })
}

/// Integral of `f` over `[a, b]` with the configured interval rule.
pub fn interval_integral(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    what: &'static str,
) -> Result<Complex64> {
    match spec.rule {
        QuadratureRule::Trapezoid => trapezoid_interval(f, a, b, spec, what),
        QuadratureRule::GaussLegendre { order } => {
            let (nodes, weights) = gauss_legendre(order);
            let mut panels = (spec.panel_count / order).max(1);
            let mut estimate = composite_gl(&f, a, b, panels, &nodes, &weights);
            let mut diff = f64::INFINITY;
            while 2 * panels * order <= MAX_PANELS {
                panels *= 2;
                let refined = composite_gl(&f, a, b, panels, &nodes, &weights);
                diff = (refined - estimate).norm();
                estimate = refined;
                if diff < spec.abs_tol {
                    return Ok(estimate);
                }
            }
            Err(Error::QuadratureNotConverged {
                what,
                diff,
                panels: panels * order,
            })
        }
    }
}

fn trapezoid_interval(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    what: &'static str,
) -> Result<Complex64> {
    let mut n = spec.panel_count;
    let h0 = (b - a) / n as f64;
    let mut sum: Complex64 = 0.5 * (f(a) + f(b));
    sum += (1..n).map(|j| f(a + j as f64 * h0)).sum::<Complex64>();
    let mut estimate = sum * h0;
    let mut diff = f64::INFINITY;
    while 2 * n <= MAX_PANELS {
        let h = (b - a) / n as f64;
        sum += (0..n).map(|j| f(a + (j as f64 + 0.5) * h)).sum::<Complex64>();
        n *= 2;
        let refined = sum * (h / 2.0);
        diff = (refined - estimate).norm();
        estimate = refined;
        if diff < spec.abs_tol {
            return Ok(estimate);
        }
    }
    Err(Error::QuadratureNotConverged {
        what,
        diff,
        panels: n,
    })
}

fn composite_gl(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    panels: usize,
    nodes: &[f64],
    weights: &[f64],
) -> Complex64 {
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in nodes.iter().zip(weights) {
            total += *w * f(mid + 0.5 * h * x);
        }
    }
    total * (0.5 * h)
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}
