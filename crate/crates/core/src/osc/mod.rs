//! Oscillatory integrals `∫ e^{i f(x)} dx`, Fresnel integrals, the complex
//! second mean value theorem and verifiers for the first-derivative van der
//! Corput estimate and its Fourier-coefficient corollary.

mod mvt;
pub mod quadrature;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::{check_interval, Error, Result};
use crate::poly::Polynomial;

pub use mvt::{complex_mvt_point, MvtForm, MvtPoint};
pub use quadrature::{integrate_complex, integrate_complex_with, integrate_real, IntegralResult, QuadratureOptions};

/// Shared real-valued callable.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Grid size for monotonicity and derivative spot-checks.
const SPOT_CHECK_POINTS: usize = 1000;

/// A real phase `f` with optional derivatives `f', f'', ...`.
#[derive(Clone)]
pub struct PhaseFunction {
    f: RealFn,
    derivatives: Vec<RealFn>,
    domain: Option<(f64, f64)>,
}

impl fmt::Debug for PhaseFunction {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("PhaseFunction")
            .field("derivatives", &self.derivatives.len())
            .field("domain", &self.domain)
            .finish()
    }
}

impl PhaseFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            derivatives: Vec::new(),
            domain: None,
        }
    }

    /// Appends the next derivative (`f'` first).
    pub fn with_derivative(mut self, d: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.derivatives.push(Arc::new(d));
        self
    }

    pub fn with_domain(mut self, a: f64, b: f64) -> Self {
        self.domain = Some((a, b));
        self
    }

    /// Phase `p(x)` with every nonzero derivative attached.
    pub fn from_polynomial(p: &Polynomial) -> Self {
        let mut phase = {
            let p = p.clone();
            PhaseFunction::new(move |x| p.eval(x))
        };
        for k in 1..=p.degree() {
            let d = p.derivative(k);
            phase = phase.with_derivative(move |x| d.eval(x));
        }
        phase
    }

    pub fn domain(&self) -> Option<(f64, f64)> {
        self.domain
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// Number of attached derivatives.
    pub fn derivative_count(&self) -> usize {
        self.derivatives.len()
    }

    /// `f^(k)(x)` if that derivative was supplied (`k >= 1`).
    pub fn derivative(&self, k: usize, x: f64) -> Option<f64> {
        if k == 0 {
            return Some(self.value(x));
        }
        self.derivatives.get(k - 1).map(|d| d(x))
    }

    /// `f'(x)`, by central difference when no derivative was supplied.
    pub fn slope(&self, x: f64) -> f64 {
        match self.derivative(1, x) {
            Some(v) => v,
            None => {
                let h = 1e-6 * x.abs().max(1.0);
                (self.value(x + h) - self.value(x - h)) / (2.0 * h)
            }
        }
    }

    /// The phase `-f`, whose integral is the conjugate of this one.
    pub fn negated(&self) -> PhaseFunction {
        let f = self.f.clone();
        PhaseFunction {
            f: Arc::new(move |x| -f(x)),
            derivatives: self
                .derivatives
                .iter()
                .map(|d| {
                    let d = d.clone();
                    Arc::new(move |x: f64| -d(x)) as RealFn
                })
                .collect(),
            domain: self.domain,
        }
    }

    /// Compares each supplied derivative against a central difference of the
    /// previous one at 32 random points of the domain (`[-1, 1]` if unset).
    pub fn check_derivatives(&self, seed: u64) -> Result<()> {
        let (a, b) = self.domain.unwrap_or((-1.0, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..32 {
            let x = rng.gen_range(a..=b);
            let h = 1e-6 * x.abs().max(1.0);
            for k in 1..=self.derivatives.len() {
                let prev = |t: f64| self.derivative(k - 1, t).unwrap_or(f64::NAN);
                let fd = (prev(x + h) - prev(x - h)) / (2.0 * h);
                let exact = self.derivative(k, x).unwrap_or(f64::NAN);
                if !((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0)) {
                    return Err(Error::Precondition(format!(
                        "derivative {k} disagrees with finite differences at x = {x}: {exact} vs {fd}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `∫_a^b e^{i f(x)} dx` to absolute tolerance `tol`.
pub fn oscillatory_integral(phase: &PhaseFunction, a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    integrate_complex(|x| Complex64::from_polar(1.0, phase.value(x)), a, b, tol)
}

/// `(∫_0^u cos x² dx, ∫_0^u sin x² dx)`, integrated one period of `x²` at a
/// time.
pub fn fresnel(u: f64, tol: f64) -> Result<(f64, f64)> {
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::InvalidArgument(format!("fresnel needs finite u >= 0, got {u}")));
    }
    if u == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut lo = 0.0;
    let mut k = 1.0;
    while lo < u {
        let hi = (k * PI).sqrt().min(u);
        let r = integrate_complex(|x| Complex64::from_polar(1.0, x * x), lo, hi, tol * (hi - lo) / u)?;
        total += r.value;
        lo = hi;
        k += 1.0;
    }
    Ok((total.re, total.im))
}

/// Checks the grid of `f'` for `f' >= lambda` and monotone increase.
fn check_increasing_slope(phase: &PhaseFunction, a: f64, b: f64, lambda: f64) -> Result<()> {
    let step = (b - a) / (SPOT_CHECK_POINTS - 1) as f64;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..SPOT_CHECK_POINTS {
        let x = a + step * i as f64;
        let d = phase.slope(x);
        if d < lambda * (1.0 - 1e-9) {
            return Err(Error::Precondition(format!("f'({x}) = {d} is below lambda = {lambda}")));
        }
        if d < prev - 1e-9 * prev.abs().max(1.0) {
            return Err(Error::Precondition(format!("f' decreases near x = {x}")));
        }
        prev = d;
    }
    Ok(())
}

/// Angular distance between two angles, in `[0, π]`.
fn angle_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Checks `|∫_a^b e^{if}| <= (1 + sin(θ - f(a))) / λ <= 2 / λ` for `f'`
/// increasing and at least `lambda`.
pub fn verify_first_vdc(phase: &PhaseFunction, a: f64, b: f64, lambda: f64, tol: f64) -> Result<BoundReport> {
    check_interval(a, b)?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument("lambda must be positive".into()));
    }
    check_increasing_slope(phase, a, b, lambda)?;
    let integral = oscillatory_integral(phase, a, b, tol)?;
    let theta = integral.argument;
    let fa = phase.value(a);
    let bound = (1.0 + (theta - fa).sin()) / lambda;
    let uniform = 2.0 / lambda;

    let mut report = BoundReport::upper("first-derivative van der Corput bound", bound, integral.modulus)
        .detail("theta", theta)
        .detail("phase_at_a", fa)
        .detail("uniform_bound", uniform)
        .detail("uniform_margin", uniform - integral.modulus)
        .detail("quadrature_error", integral.error_estimate)
        .detail("obstruction_distance", angle_distance(theta, fa + 1.5 * PI));
    report.pass = report.pass && uniform - integral.modulus >= -crate::bounds::MARGIN_SLACK;
    Ok(report)
}

/// Checks the Fourier-coefficient bound for an increasing `f` on `[0, 1]`.
///
/// The bound is `(f(1) - f(0)) (1 + sin θ) / (2πn)` with `θ = arg f̂(n)`.
/// The `(1 - sin θ)` variant is evaluated as well and recorded under
/// `printed_bound` / `printed_margin`; it does not affect `pass`.
pub fn verify_riemann_lebesgue(f: impl Fn(f64) -> f64, n: u32, tol: f64) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("frequency must be positive".into()));
    }
    let step = 1.0 / (SPOT_CHECK_POINTS - 1) as f64;
    let mut prev = f(0.0);
    for i in 1..SPOT_CHECK_POINTS {
        let v = f(step * i as f64);
        if v < prev - 1e-12 * prev.abs().max(1.0) {
            return Err(Error::Precondition(format!("f decreases near x = {}", step * i as f64)));
        }
        prev = v;
    }
    let freq = TAU * n as f64;
    let coeff = integrate_complex(|x| f(x) * Complex64::from_polar(1.0, -freq * x), 0.0, 1.0, tol)?;
    let theta = coeff.argument;
    let rise = f(1.0) - f(0.0);
    let bound = rise * (1.0 + theta.sin()) / freq;
    let printed = rise * (1.0 - theta.sin()) / freq;

    let mut report = BoundReport::upper("fourier coefficient of an increasing function", bound, coeff.modulus)
        .detail("theta", theta)
        .detail("modulus", coeff.modulus)
        .detail("printed_bound", printed)
        .detail("printed_margin", printed - coeff.modulus)
        .detail("quadrature_error", coeff.error_estimate);
    report.notes = if printed - coeff.modulus < -crate::bounds::MARGIN_SLACK {
        "(1 - sin θ) variant violated; (1 + sin θ) variant checked".to_string()
    } else {
        "both sign variants hold".to_string()
    };
    Ok(report)
}

/// Summary of [`fuzz_first_vdc`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FirstVdcFuzz {
    pub trials: usize,
    pub violations: usize,
    pub worst_margin: f64,
    /// Nonzero integrals whose argument lies within `1e-3` of `f(a) + 3π/2`.
    pub obstruction_hits: usize,
    pub min_obstruction_distance: f64,
}

/// Random convex increasing phases: `f' = c1 + c2 x + c3 x²` with positive
/// coefficients on an interval `[a, b] ⊂ [0, 8]`, `lambda = f'(a)`.
pub fn fuzz_first_vdc(trials: usize, seed: u64, tol: f64) -> Result<FirstVdcFuzz> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = FirstVdcFuzz {
        trials,
        violations: 0,
        worst_margin: f64::INFINITY,
        obstruction_hits: 0,
        min_obstruction_distance: f64::INFINITY,
    };
    for _ in 0..trials {
        let c0 = rng.gen_range(-PI..PI);
        let c1 = rng.gen_range(0.2..5.0);
        let c2 = rng.gen_range(0.0..5.0);
        let c3 = rng.gen_range(0.0..3.0);
        let a = rng.gen_range(0.0..2.0);
        let b = a + rng.gen_range(0.5..6.0);
        let phase = PhaseFunction::from_polynomial(&Polynomial::new(vec![c0, c1, c2 / 2.0, c3 / 3.0]));
        let lambda = phase.slope(a);
        let report = verify_first_vdc(&phase, a, b, lambda, tol)?;
        let margin = report.margin.unwrap_or(f64::NAN);
        out.worst_margin = out.worst_margin.min(margin);
        if !report.pass {
            out.violations += 1;
        }
        if report.measured.unwrap_or(0.0) > 1e-12 {
            let d = report.details["obstruction_distance"];
            out.min_obstruction_distance = out.min_obstruction_distance.min(d);
            if d < 1e-3 {
                out.obstruction_hits += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_phase(c: &[f64]) -> PhaseFunction {
        PhaseFunction::from_polynomial(&Polynomial::new(c.to_vec()))
    }

    #[test]
    fn linear_phase_on_half_period() {
        let r = oscillatory_integral(&poly_phase(&[0.0, 1.0]), 0.0, PI, 1e-12).unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-12);
        assert!((r.modulus - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_and_cubic_reference_values() {
        let q = oscillatory_integral(&poly_phase(&[0.0, 0.0, 0.5]), -2.0, 2.0, 1e-12).unwrap();
        assert!((q.modulus - 3.33346).abs() < 1e-4);
        let c = oscillatory_integral(&poly_phase(&[0.0, -1.0, 0.0, 1.0 / 6.0]), -3.0, 3.0, 1e-12).unwrap();
        assert!((c.modulus - 4.61932).abs() < 1e-4);
    }

    #[test]
    fn fresnel_zero_and_bad_input() {
        assert_eq!(fresnel(0.0, 1e-12).unwrap(), (0.0, 0.0));
        assert!(fresnel(-1.0, 1e-12).is_err());
        assert!(fresnel(f64::INFINITY, 1e-12).is_err());
    }

    #[test]
    fn derivative_check_catches_wrong_derivative() {
        let good = poly_phase(&[1.0, -2.0, 0.5, 0.25]).with_domain(-3.0, 3.0);
        assert!(good.check_derivatives(1).is_ok());
        let bad = PhaseFunction::new(|x| x * x).with_derivative(|x| 3.0 * x);
        assert!(bad.check_derivatives(1).is_err());
    }

    #[test]
    fn first_vdc_examples() {
        let r = verify_first_vdc(&poly_phase(&[0.0, 1.0]), 0.0, PI, 1.0, 1e-12).unwrap();
        assert!(r.pass);
        assert!((r.measured.unwrap() - 2.0).abs() < 1e-10);
        assert!(r.margin.unwrap().abs() < 1e-10);

        let r = verify_first_vdc(&poly_phase(&[0.0, 2.0]), 0.0, 10.0, 2.0, 1e-12).unwrap();
        let exact = (Complex64::new(0.0, 20.0).exp() - 1.0).norm() / 2.0;
        assert!((r.measured.unwrap() - exact).abs() < 1e-10);
        assert!(r.pass && exact <= 1.0);

        let r = verify_first_vdc(&poly_phase(&[0.0, 1.0, 0.0, 1.0 / 3.0]), 0.5, 3.0, 1.25, 1e-12).unwrap();
        assert!(r.pass);
        assert!(r.details["uniform_margin"] >= 0.0);
    }

    #[test]
    fn first_vdc_precondition_failures() {
        // f' = 2x dips below lambda near 0
        assert!(matches!(
            verify_first_vdc(&poly_phase(&[0.0, 0.0, 1.0]), 0.0, 2.0, 1.0, 1e-10),
            Err(Error::Precondition(_))
        ));
        // f' = -2x + 10 is decreasing
        assert!(matches!(
            verify_first_vdc(&poly_phase(&[0.0, 10.0, -1.0]), 0.0, 2.0, 1.0, 1e-10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn riemann_lebesgue_examples() {
        let r = verify_riemann_lebesgue(|x| x, 1, 1e-12).unwrap();
        assert!(r.pass);
        assert!((r.measured.unwrap() - 1.0 / TAU).abs() < 1e-12);
        assert!((r.details["theta"] - PI / 2.0).abs() < 1e-10);
        assert!(r.details["printed_bound"].abs() < 1e-12);
        assert!(r.details["printed_margin"] < -0.15);
        assert!((r.bound - 1.0 / PI).abs() < 1e-12);
        assert!((r.margin.unwrap() - 1.0 / TAU).abs() < 1e-12);

        let r = verify_riemann_lebesgue(|_| 3.0, 4, 1e-12).unwrap();
        assert!(r.pass && r.bound == 0.0);

        let r = verify_riemann_lebesgue(|x| x * x, 2, 1e-12).unwrap();
        assert!(r.pass && r.margin.unwrap() >= 0.0);

        assert!(verify_riemann_lebesgue(|x| -x, 1, 1e-12).is_err());
        assert!(verify_riemann_lebesgue(|x| x, 0, 1e-12).is_err());
    }

    #[test]
    fn small_fuzz_run_is_clean() {
        let s = fuzz_first_vdc(40, 3, 1e-11).unwrap();
        assert_eq!(s.violations, 0);
        assert!(s.worst_margin >= -1e-9);
    }
}
