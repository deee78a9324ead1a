//! Airy function Ai for real and complex arguments.
//!
//! Three regions by |z|:
//!
//! * |z| <= 3: Maclaurin series `Ai = c1 f(z) - c2 g(z)`.
//! * |z| >= 8: asymptotic expansion, with the connection formula
//!   `Ai(z) = -w Ai(wz) - conj(w) Ai(conj(w) z)` for |arg z| > 2pi/3.
//! * in between: Taylor-series integration of `y'' = z y` along the ray
//!   through z. In the recessive sector |arg z| < pi/3 we start on the outer
//!   circle and integrate inward; elsewhere we start on the inner circle and
//!   integrate outward. Both directions are the stable ones for Ai.

use std::f64::consts::{FRAC_PI_3, PI};

use num_complex::Complex64;

/// Ai(0) = 3^(-2/3) / Gamma(2/3)
const AI0: f64 = 0.355_028_053_887_817_2;
/// -Ai'(0) = 3^(-1/3) / Gamma(1/3)
const AIP0: f64 = 0.258_819_403_792_806_8;

pub const SERIES_RADIUS: f64 = 3.0;
pub const ASYMPTOTIC_RADIUS: f64 = 8.0;
const STEP: f64 = 0.5;

pub fn airy_ai(x: f64) -> f64 {
    airy_ai_complex(Complex64::new(x, 0.0)).re
}

pub fn airy_ai_complex(z: Complex64) -> Complex64 {
    airy_ai_pair(z).0
}

/// `(Ai(z), Ai'(z))`.
pub fn airy_ai_pair(z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    if r <= SERIES_RADIUS {
        return maclaurin(z);
    }
    if r >= ASYMPTOTIC_RADIUS {
        return asymptotic(z);
    }
    let dir = z / r;
    if z.arg().abs() < FRAC_PI_3 {
        let start = dir * ASYMPTOTIC_RADIUS;
        let (y, dy) = asymptotic(start);
        taylor_walk(start, y, dy, z)
    } else {
        let start = dir * SERIES_RADIUS;
        let (y, dy) = maclaurin(start);
        taylor_walk(start, y, dy, z)
    }
}

pub(crate) fn maclaurin(z: Complex64) -> (Complex64, Complex64) {
    let z3 = z * z * z;
    let one = Complex64::new(1.0, 0.0);

    // f = sum z^{3k} / prod (3j-1)(3j),  g = sum z^{3k+1} / prod (3j)(3j+1)
    let mut f = one;
    let mut g = z;
    let mut fp = Complex64::new(0.0, 0.0);
    let mut gp = one;
    let mut a = one;
    let mut b = z;
    let mut ap = z * z / 2.0;
    let mut bp = one;
    for k in 1..200 {
        let kf = k as f64;
        a *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        b *= z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        if k > 1 {
            ap *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
        }
        bp *= z3 / ((3.0 * kf) * (3.0 * kf - 2.0));
        f += a;
        g += b;
        fp += ap;
        gp += bp;
        let scale = f.norm() + g.norm() + fp.norm() + gp.norm();
        if a.norm() + b.norm() + ap.norm() + bp.norm() <= 1e-17 * scale {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

pub(crate) fn asymptotic(z: Complex64) -> (Complex64, Complex64) {
    if z.arg().abs() <= 2.0 * FRAC_PI_3 {
        return asymptotic_principal(z);
    }
    let w = Complex64::from_polar(1.0, 2.0 * FRAC_PI_3);
    let wc = w.conj();
    let (a1, d1) = asymptotic_principal(w * z);
    let (a2, d2) = asymptotic_principal(wc * z);
    (-w * a1 - wc * a2, -wc * d1 - w * d2)
}

fn asymptotic_principal(z: Complex64) -> (Complex64, Complex64) {
    let sqrt_z = z.sqrt();
    let quarter = sqrt_z.sqrt();
    let zeta = 2.0 / 3.0 * z * sqrt_z;
    let inv = 1.0 / zeta;

    let mut u = 1.0f64;
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum_u = Complex64::new(1.0, 0.0);
    let mut sum_v = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..100 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        power *= -inv;
        let tu = u * power;
        let tv = v * power;
        let size = tu.norm().max(tv.norm());
        // stop at the smallest term of the divergent series
        if size > last {
            break;
        }
        sum_u += tu;
        sum_v += tv;
        last = size;
        if size < 1e-17 {
            break;
        }
    }
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    (e / quarter * sum_u, -e * quarter * sum_v)
}

/// Integrates `y'' = z y` from `from` to `to` along the straight segment.
fn taylor_walk(
    from: Complex64,
    mut y: Complex64,
    mut dy: Complex64,
    to: Complex64,
) -> (Complex64, Complex64) {
    let steps = ((to - from).norm() / STEP).ceil().max(1.0) as usize;
    let h = (to - from) / steps as f64;
    let mut center = from;
    for _ in 0..steps {
        // c_k = a_k h^k with a_{k+2} = (center a_k + a_{k-1}) / ((k+1)(k+2))
        let h2 = h * h;
        let h3 = h2 * h;
        let mut c_prev = Complex64::new(0.0, 0.0);
        let mut c0 = y;
        let mut c1 = dy * h;
        let mut value = c0 + c1;
        let mut deriv = c1;
        for k in 0..120 {
            let kf = k as f64;
            let c2 = (center * h2 * c0 + h3 * c_prev) / ((kf + 1.0) * (kf + 2.0));
            value += c2;
            deriv += (kf + 2.0) * c2;
            c_prev = c0;
            c0 = c1;
            c1 = c2;
            if k > 4 && c0.norm() + c1.norm() <= 1e-18 * value.norm() {
                break;
            }
        }
        y = value;
        dy = deriv / h;
        center += h;
    }
    (y, dy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn value_and_slope_at_origin() {
        let (a, d) = airy_ai_pair(c(0.0, 0.0));
        assert_eq!(a.re, AI0);
        assert_eq!(d.re, -AIP0);
    }

    #[test]
    fn regions_agree_on_their_boundaries() {
        // Compare each region's method against its neighbour's at the seams.
        for k in 0..24 {
            let theta = -PI + 2.0 * PI * (k as f64 + 0.37) / 24.0;
            let dir = Complex64::from_polar(1.0, theta);

            let z = dir * 3.0;
            let (series, _) = maclaurin(z);
            let start = dir * ASYMPTOTIC_RADIUS;
            let (y, dy) = asymptotic(start);
            let (walked, _) = taylor_walk(start, y, dy, z);
            let scale = series.norm().max(1e-300);
            if theta.abs() < FRAC_PI_3 {
                assert!((series - walked).norm() / scale < 1e-11, "theta {theta}");
            }

            let z = dir * 8.0;
            let (asym, _) = asymptotic(z);
            let (y, dy) = maclaurin(dir * 3.0);
            let (walked, _) = taylor_walk(dir * 3.0, y, dy, z);
            if theta.abs() >= FRAC_PI_3 {
                assert!(
                    (asym - walked).norm() / asym.norm() < 1e-11,
                    "theta {theta}: {asym} vs {walked}"
                );
            }
        }
    }

    #[test]
    fn derivative_pair_is_consistent() {
        for z in [c(-5.0, 0.5), c(2.0, -1.0), c(6.5, 0.1), c(-12.0, 2.0), c(9.0, 3.0)] {
            let h = 1e-4;
            let (_, d) = airy_ai_pair(z);
            let fd = (airy_ai_complex(z + h) - airy_ai_complex(z - h)) / (2.0 * h);
            assert!((d - fd).norm() <= 1e-7 * (1.0 + d.norm()), "{z}: {d} vs {fd}");
        }
    }

    #[test]
    fn underflows_for_large_positive_x() {
        assert_eq!(airy_ai(1e4), 0.0);
        assert!(airy_ai(50.0) > 0.0);
    }

    #[test]
    fn real_axis_imaginary_part_vanishes() {
        for x in [-20.0, -7.0, -4.0, 4.0, 7.0] {
            let v = airy_ai_complex(c(x, 0.0));
            assert!(v.im.abs() < 1e-12 * (1.0 + v.re.abs()), "x={x}: {v}");
        }
    }
}
