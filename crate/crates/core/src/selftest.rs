//! Quick invariant suite behind `chirp selftest`. Output lines carry no
//! timings, so two runs print the same bytes.

use num_complex::Complex64;

use crate::error::Result;
use crate::experiments::{alpha_error_curve, invariance_probes, invariant_density};
use crate::factorization::forward_coeffs;
use crate::gridfield::{default_grid, make_grid, rel_l2_error};
use crate::propagators::{
    airy_exact, airy_gauss_exact, bessel_psi1, chirped_oracle, factorized_evolution,
    psi1_generic, spectral_free_step,
};
use crate::specfun::{airy_ai, bessel_jn, generalized_bessel, QuadratureSpec};
use crate::state::{sample, InitialState};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn within(name: &'static str, value: f64, tol: f64) -> Self {
        Check {
            name,
            pass: value <= tol,
            detail: format!("{value:.3e} <= {tol:.0e}"),
        }
    }

    pub fn line(&self) -> String {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        format!("{tag} {}: {}", self.name, self.detail)
    }
}

fn coefficients() -> Result<Check> {
    let mut w = 0.0f64;
    for alpha in [0.0, 0.01, 0.5, 3.0, 10.0] {
        for t in [0.0, 0.5, 1.0, 5.0] {
            let c = forward_coeffs(alpha, t)?;
            w = w.max(((-2.0 * c.f2).exp() - c.s).abs() / c.s);
            w = w.max((c.f4 + t / (2.0 * c.s)).abs());
        }
    }
    Ok(Check::within("factor-coefficients", w, 1e-14))
}

fn bessel_reductions() -> Result<Vec<Check>> {
    let mut bitwise = true;
    for n in 0..4u32 {
        for x in [0.0, 0.7, 3.0, 12.0] {
            bitwise &= generalized_bessel(n as i64, x, 0.0)?.re == bessel_jn(n, x)?;
        }
    }
    let mut w = 0.0f64;
    for c in [0.1, 1.0, 5.0] {
        let want = Complex64::from_polar(bessel_jn(0, c / 2.0)?, c / 2.0);
        w = w.max((generalized_bessel(0, 0.0, c)? - want).norm());
    }
    Ok(vec![
        Check {
            name: "generalized-bessel-reduces-to-jn",
            pass: bitwise,
            detail: format!("bit-identical: {bitwise}"),
        },
        Check::within("generalized-bessel-at-origin", w, 1e-9),
    ])
}

fn airy_gauss_vs_oracle(q: &QuadratureSpec) -> Result<Check> {
    let g = default_grid();
    let st = InitialState::AiryGauss { eps: 1.0, beta: 0.01 };
    let exact = airy_gauss_exact(1.0, 0.01, 1.0, &g)?;
    let oracle = chirped_oracle(&st, 0.0, 1.0, &g, q)?;
    Ok(Check::within("airy-gauss-vs-oracle", rel_l2_error(&exact, &oracle.field)?, 1e-6))
}

fn factorization_identity(q: &QuadratureSpec) -> Result<Check> {
    let g = default_grid();
    let mut w = 0.0f64;
    for (st, alpha, t) in [
        (InitialState::Gaussian { sigma: 1.0 }, 0.5, 5.0),
        (InitialState::Sinc { b: 1.0 }, 3.0, 1.0),
    ] {
        let a = factorized_evolution(&st, alpha, t, &g, q)?;
        let b = chirped_oracle(&st, alpha, t, &g, q)?;
        w = w.max(rel_l2_error(&a.field, &b.field)?);
    }
    Ok(Check::within("factorization-identity", w, 1e-8))
}

fn unitarity(q: &QuadratureSpec) -> Result<Check> {
    let g = make_grid(1024, -40.0, 40.0)?;
    let f = sample(&InitialState::Gaussian { sigma: 1.5 }, &g, q)?;
    let n0 = f.l2_norm();
    let n1 = spectral_free_step(&f, 4.0)?.l2_norm();
    Ok(Check::within("free-step-norm", (n1 - n0).abs() / n0, 1e-12))
}

fn invariance(q: &QuadratureSpec) -> Result<Check> {
    let probes = invariance_probes();
    let st = InitialState::Bessel { n: 1 };
    let base = invariant_density(&st, &forward_coeffs(1.0, 0.0)?, &probes, q)?;
    let mut w = 0.0f64;
    for t in [1.0, 5.0] {
        let v = invariant_density(&st, &forward_coeffs(1.0, t)?, &probes, q)?;
        w = v.iter().zip(&base).map(|(a, b)| (a - b).abs()).fold(w, f64::max);
    }
    Ok(Check::within("density-invariance", w, 1e-12))
}

fn ordering(q: &QuadratureSpec) -> Result<Check> {
    let g = make_grid(2048, -40.0, 40.0)?;
    let rows = alpha_error_curve(&InitialState::Sinc { b: 1.0 }, &[0.3, 1.0, 3.0, 10.0], 5.0, &g, q)?;
    let decreasing = rows.windows(2).all(|w| w[1].err_psi0 < w[0].err_psi0);
    let improved = rows.iter().all(|r| r.err_psi1 <= r.err_psi0);
    let detail = rows
        .iter()
        .map(|r| format!("{}:{:.2e}/{:.2e}", r.alpha, r.err_psi0, r.err_psi1))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(Check {
        name: "sinc-error-ordering",
        pass: decreasing && improved,
        detail,
    })
}

fn bessel_first_order(q: &QuadratureSpec) -> Result<Check> {
    let g = default_grid();
    let st = InitialState::Bessel { n: 0 };
    let a = psi1_generic(&st, 10.0, 5.0, &g, q)?;
    let b = bessel_psi1(0, 10.0, 5.0, &g, q)?;
    Ok(Check::within("bessel-first-order", rel_l2_error(&a.field, &b.field)?, 1e-6))
}

fn airy_rigidity() -> Result<Check> {
    let g = make_grid(4096, -40.0, 40.0)?;
    let mut w = 0.0f64;
    for t in [1.0, 2.0] {
        let shift = t * t / 4.0;
        let f = airy_exact(1.0, t, &g)?;
        w = g
            .xs()
            .zip(f.density())
            .map(|(x, d)| (d - airy_ai(x - shift).powi(2)).abs())
            .fold(w, f64::max);
    }
    Ok(Check::within("airy-rigid-translation", w, 1e-6))
}

pub fn run_selftest(q: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut checks = vec![coefficients()?];
    checks.extend(bessel_reductions()?);
    checks.push(unitarity(q)?);
    checks.push(airy_gauss_vs_oracle(q)?);
    checks.push(factorization_identity(q)?);
    checks.push(invariance(q)?);
    checks.push(ordering(q)?);
    checks.push(bessel_first_order(q)?);
    checks.push(airy_rigidity()?);
    Ok(checks)
}
