use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use corput::osc::{fresnel, fuzz_first_vdc, oscillatory_integral, verify_riemann_lebesgue};
use corput::poly::Polynomial;
use corput::PhaseFunction;

/// Power series for the Fresnel pair, summed until terms drop below 1e-18.
fn fresnel_series(u: f64) -> (f64, f64) {
    let (mut c, mut s) = (0.0, 0.0);
    let mut fact = 1.0; // (2k)!
    for k in 0..60 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        if k > 0 {
            fact *= (2.0 * kf - 1.0) * (2.0 * kf);
        }
        let tc = sign * u.powf(4.0 * kf + 1.0) / (fact * (4.0 * kf + 1.0));
        let ts = sign * u.powf(4.0 * kf + 3.0) / (fact * (2.0 * kf + 1.0) * (4.0 * kf + 3.0));
        c += tc;
        s += ts;
        if tc.abs() < 1e-18 && ts.abs() < 1e-18 {
            break;
        }
    }
    (c, s)
}

#[test]
fn linear_phase_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let (c0, c1) = (
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0.2..30.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
        );
        let a = rng.gen_range(-5.0..5.0);
        let b = a + rng.gen_range(0.1..10.0);
        let phase = PhaseFunction::from_polynomial(&Polynomial::new(vec![c0, c1]));
        let r = oscillatory_integral(&phase, a, b, 1e-12).unwrap();
        let exact =
            (Complex64::new(0.0, c0 + c1 * b).exp() - Complex64::new(0.0, c0 + c1 * a).exp()) / Complex64::new(0.0, c1);
        assert!((r.value - exact).norm() < 1e-11);
        assert!(r.modulus <= 2.0 / c1.abs() + 1e-12);
    }
}

#[test]
fn conjugate_phase_gives_conjugate_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..30 {
        let coeffs: Vec<f64> = (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let phase = PhaseFunction::from_polynomial(&Polynomial::new(coeffs));
        let r = oscillatory_integral(&phase, -1.5, 2.0, 1e-12).unwrap();
        let s = oscillatory_integral(&phase.negated(), -1.5, 2.0, 1e-12).unwrap();
        assert!((r.value - s.value.conj()).norm() < 1e-11);
    }
}

#[test]
fn tightening_tolerance_converges() {
    let phase = PhaseFunction::from_polynomial(&Polynomial::new(vec![0.0, 0.0, 3.0, -0.5]));
    let reference = oscillatory_integral(&phase, -2.0, 3.0, 1e-14).unwrap().value;
    let mut tol = 1e-4;
    while tol > 1e-12 {
        let r = oscillatory_integral(&phase, -2.0, 3.0, tol).unwrap();
        assert!((r.value - reference).norm() <= tol, "tol {tol}");
        tol *= 0.5;
    }
}

#[test]
fn fresnel_matches_series() {
    // frozen from the series oracle below
    let (c, s) = fresnel(FRAC_PI_2.sqrt(), 1e-13).unwrap();
    assert!((c - 0.977_451_424_291_329_8).abs() < 1e-12);
    assert!((s - 0.549_276_385_232_169).abs() < 1e-12);
    for k in 1..=30 {
        let u = 0.1 * k as f64;
        let (c, s) = fresnel(u, 1e-13).unwrap();
        let (cs, ss) = fresnel_series(u);
        assert!((c - cs).abs() < 1e-11 && (s - ss).abs() < 1e-11, "u = {u}");
    }
}

#[test]
fn fresnel_tail_limit() {
    let u: f64 = 50.0;
    let (c, s) = fresnel(u, 1e-12).unwrap();
    let limit = (PI / 8.0).sqrt();
    // leading asymptotic correction
    let (cc, sc) = (limit + (u * u).sin() / (2.0 * u), limit - (u * u).cos() / (2.0 * u));
    assert!((c - cc).abs() < 1e-3 && (s - sc).abs() < 1e-3);
    assert!((c - limit).abs() < 0.011 && (s - limit).abs() < 0.011);
}

#[test]
fn first_derivative_fuzz_has_no_violations() {
    let r = fuzz_first_vdc(500, 2024, 1e-11).unwrap();
    assert_eq!(r.violations, 0);
    assert!(r.worst_margin >= -1e-9);
}

#[test]
fn fourier_bound_on_increasing_functions() {
    let funcs: [fn(f64) -> f64; 4] = [|x| x, |x| x * x, |x| x.exp(), |x| (3.0 * x).tanh()];
    for f in funcs {
        for n in 1..=5 {
            let r = verify_riemann_lebesgue(f, n, 1e-12).unwrap();
            assert!(r.pass, "n = {n}: {r:?}");
        }
    }
    assert!(verify_riemann_lebesgue(|x| -x, 1, 1e-12).is_err());
}
