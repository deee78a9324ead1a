//! Evolution paths checked against each other and against the free
//! Schrödinger equation itself.

use num_complex::Complex64;

use chirp::factorization::forward_coeffs;
use chirp::gridfield::{default_grid, make_grid, rel_l2_error, Grid, WaveField};
use chirp::propagators::closed_form::{airy_family_at, sinc_psi1_quadrature_at};
use chirp::propagators::{
    airy_exact, airy_gauss_exact, bessel_exact, chirped_oracle, exact_closed_form, psi0,
    psi1_generic, sinc_psi0, sinc_psi1, spectral_free_step,
};
use chirp::specfun::airy_ai;
use chirp::{InitialState, Method, PropagatorRegistry, QuadratureSpec};

/// `|i d_t psi + (1/2) d_x^2 psi|` by fourth-order central differences.
fn schrodinger_residual(psi: impl Fn(f64, f64) -> Complex64, x: f64, t: f64) -> f64 {
    let h = 5e-4;
    let d1 = |f: &dyn Fn(f64) -> Complex64, u: f64| {
        (-f(u + 2.0 * h) + 8.0 * f(u + h) - 8.0 * f(u - h) + f(u - 2.0 * h)) / (12.0 * h)
    };
    let d2 = |f: &dyn Fn(f64) -> Complex64, u: f64| {
        (-f(u + 2.0 * h) + 16.0 * f(u + h) - 30.0 * f(u) + 16.0 * f(u - h) - f(u - 2.0 * h))
            / (12.0 * h * h)
    };
    let dt = d1(&|s| psi(x, s), t);
    let dxx = d2(&|y| psi(y, t), x);
    (Complex64::i() * dt + 0.5 * dxx).norm()
}

#[test]
fn airy_solves_free_equation() {
    for t in [0.5, 1.0, 2.0] {
        for x in [-6.0, -3.3, -1.0, 0.0, 1.7, 3.0] {
            let r = schrodinger_residual(|x, t| airy_family_at(1.0, 0.0, 0.0, t, x), x, t);
            assert!(r <= 1e-6, "x={x} t={t}: residual {r:e}");
        }
    }
}

#[test]
fn chirped_apodized_airy_solves_free_equation() {
    for (beta, alpha) in [(0.01, 0.0), (0.05, 0.7), (0.0, 2.0)] {
        for t in [0.3, 1.0, 2.0] {
            for x in [-5.0, -1.5, 0.0, 2.0] {
                let r = schrodinger_residual(|x, t| airy_family_at(1.0, beta, alpha, t, x), x, t);
                assert!(r <= 1e-6, "beta={beta} alpha={alpha} x={x} t={t}: {r:e}");
            }
        }
    }
}

#[test]
fn airy_gauss_matches_free_step_of_initial_field() {
    let g = default_grid();
    let start = airy_gauss_exact(1.0, 0.01, 0.0, &g).unwrap();
    let evolved = spectral_free_step(&start, 1.0).unwrap();
    let exact = airy_gauss_exact(1.0, 0.01, 1.0, &g).unwrap();
    assert!(rel_l2_error(&exact, &evolved).unwrap() <= 1e-6);
}

#[test]
fn airy_density_is_a_rigid_translate() {
    let g = default_grid();
    let argmax = |f: &WaveField| {
        let d = f.density();
        g.x((0..d.len()).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap())
    };
    let x0 = argmax(&airy_exact(1.0, 0.0, &g).unwrap());
    for t in [1.0, 2.0] {
        let f = airy_exact(1.0, t, &g).unwrap();
        assert!((argmax(&f) - x0 - t * t / 4.0).abs() <= g.dx());
        for (x, d) in g.xs().zip(f.density()) {
            assert!((d - airy_ai(x - t * t / 4.0).powi(2)).abs() <= 1e-6);
        }
    }
}

#[test]
fn closed_forms_match_oracle_on_default_grid() {
    let g = default_grid();
    let q = QuadratureSpec::default();
    let states = [
        InitialState::Airy { eps: 1.0 },
        InitialState::AiryGauss { eps: 1.0, beta: 0.01 },
        InitialState::Sinc { b: 1.0 },
        InitialState::Bessel { n: 0 },
        InitialState::Bessel { n: 2 },
        InitialState::Gaussian { sigma: 1.0 },
    ];
    for st in &states {
        for (alpha, t) in [(0.0, 1.0), (0.3, 5.0), (3.0, 5.0), (10.0, 5.0)] {
            let ex = exact_closed_form(st, alpha, t, &g, &q).unwrap();
            let or = chirped_oracle(st, alpha, t, &g, &q).unwrap();
            let e = rel_l2_error(&ex.field, &or.field).unwrap();
            assert!(e <= 1e-5, "{st} alpha={alpha} t={t}: {e:e}");
        }
    }
}

#[test]
fn bessel_exact_matches_oracle() {
    let g = default_grid();
    let q = QuadratureSpec::default();
    let ex = bessel_exact(0, 0.5, 5.0, &g, &q).unwrap();
    let or = chirped_oracle(&InitialState::Bessel { n: 0 }, 0.5, 5.0, &g, &q).unwrap();
    assert!(rel_l2_error(&ex.field, &or.field).unwrap() <= 1e-5);
}

#[test]
fn spectral_first_order_matches_sinc_quadrature_path() {
    let g = make_grid(4096, -80.0, 80.0).unwrap();
    let q = QuadratureSpec::default();
    for alpha in [0.3, 1.0, 3.0] {
        let c = forward_coeffs(alpha, 5.0).unwrap();
        let reference =
            WaveField::from_fn(g, |x| sinc_psi1_quadrature_at(1.0, &c, x, &q).unwrap()).unwrap();
        let spectral = psi1_generic(&InitialState::Sinc { b: 1.0 }, alpha, 5.0, &g, &q).unwrap();
        let e = rel_l2_error(&spectral.field, &reference).unwrap();
        assert!(e <= 1e-8, "alpha={alpha}: {e:e}");
    }
}

#[test]
fn psi0_of_bessel_is_scaled_jn() {
    let g = make_grid(1024, -30.0, 30.0).unwrap();
    let q = QuadratureSpec::default();
    let p = psi0(&InitialState::Bessel { n: 3 }, 0.8, 2.0, &g, &q).unwrap();
    let s = 1.0 + 2.0 * 0.8 * 2.0;
    for (x, v) in g.xs().zip(p.field.values()) {
        let j = chirp::specfun::bessel_jn(3, x / s).unwrap();
        let want = Complex64::from_polar(j / s.sqrt(), 0.8 / s * x * x);
        assert!((v - want).norm() <= 1e-14);
    }
}

#[test]
fn first_order_correction_is_small_in_density_for_sinc() {
    let g = default_grid();
    let p0 = sinc_psi0(1.0, 0.3, 5.0, &g).unwrap();
    let p1 = sinc_psi1(1.0, 0.3, 5.0, &g).unwrap();
    let peak = p0.field.density().into_iter().fold(0.0, f64::max);
    let diff = p1
        .field
        .values()
        .iter()
        .zip(p0.field.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .fold(0.0, f64::max);
    assert!(diff <= 0.05 * peak);
}

#[test]
fn sinc_oracle_has_one_central_lobe() {
    let g = default_grid();
    let q = QuadratureSpec::default();
    let f = chirped_oracle(&InitialState::Sinc { b: 1.0 }, 3.0, 5.0, &g, &q).unwrap();
    assert_eq!(f.coeffs.s, 31.0);
    let d = f.field.density();
    let j = (0..d.len()).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
    assert!(g.x(j).abs() <= g.dx());
    // halfway to the first zero at pi s / b the squeezed sinc density is
    // (2/pi)^2 of its peak
    let half = std::f64::consts::PI * 31.0 / 2.0;
    let k = ((half - g.x_min()) / g.dx()).round() as usize;
    let ratio = d[k] / d[j];
    assert!((ratio - 4.0 / std::f64::consts::PI.powi(2)).abs() < 0.05, "ratio {ratio}");
}

fn evolve_all(grid: &Grid, st: &InitialState, alpha: f64, t: f64) -> Vec<(String, WaveField)> {
    let reg = PropagatorRegistry::default();
    let q = QuadratureSpec::default();
    reg.iter()
        .map(|p| (p.name().to_string(), p.evolve(st, alpha, t, grid, &q).unwrap().field))
        .collect()
}

#[test]
fn exact_paths_agree_through_registry() {
    let g = make_grid(2048, -40.0, 40.0).unwrap();
    let st = InitialState::Gaussian { sigma: 1.2 };
    let fields = evolve_all(&g, &st, 0.8, 2.0);
    let get = |name: &str| &fields.iter().find(|(n, _)| n == name).unwrap().1;
    let oracle = get("oracle");
    for name in ["exact", "factorized"] {
        assert!(rel_l2_error(get(name), oracle).unwrap() <= 1e-9, "{name}");
    }
    assert!(rel_l2_error(get("psi1"), get("psi1-spectral")).unwrap() <= 1e-9);
}

#[test]
fn oracle_reports_its_method() {
    let g = make_grid(512, -20.0, 20.0).unwrap();
    let q = QuadratureSpec::default();
    let e = chirped_oracle(&InitialState::Gaussian { sigma: 1.0 }, 0.5, 1.0, &g, &q).unwrap();
    assert_eq!(e.method, Method::Oracle);
    assert_eq!(e.t(), 1.0);
}
