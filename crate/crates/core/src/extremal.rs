//! Endpoint-optimal oscillatory integrals.
//!
//! `max_{a,b} |∫_a^b e^{if}|` is the diameter of the curve
//! `G(t) = ∫_{t_0}^t e^{if(x)} dx`. The curve is sampled on a window, the
//! diameter found by brute force over sample pairs, then both endpoints are
//! refined by alternating golden-section searches. Outside the window `f'`
//! is assumed monotone and nonzero, so each tail moves the curve by at most
//! `2 / |f'(edge)|`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, SQRT_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_interval, Error, Result};
use crate::optimize::{golden_max, scan_then_golden};
use crate::osc::{fresnel, integrate_complex, PhaseFunction};
use crate::poly::Polynomial;

/// Sampled antiderivative curve `t ↦ ∫_{t_0}^t e^{if}`.
#[derive(Clone, Debug, Serialize)]
pub struct CurveTrace {
    pub parameters: Vec<f64>,
    pub points: Vec<Complex64>,
    /// Bound on the contribution of the two tails outside the window.
    pub truncation_bound: f64,
    #[serde(skip)]
    phase: PhaseFunction,
    #[serde(skip)]
    tol: f64,
}

impl CurveTrace {
    pub fn window(&self) -> (f64, f64) {
        (self.parameters[0], self.parameters[self.parameters.len() - 1])
    }

    /// `G(t)` for any `t` in the window, integrating from the sample at `index`.
    fn point_at(&self, index: usize, t: f64) -> Result<Complex64> {
        let t0 = self.parameters[index];
        let base = self.points[index];
        let width = self.window().1 - self.window().0;
        if t == t0 {
            return Ok(base);
        }
        let (lo, hi, sign) = if t > t0 { (t0, t, 1.0) } else { (t, t0, -1.0) };
        let tol = (self.tol * (hi - lo) / width).max(1e-15);
        let piece = integrate_complex(|x| Complex64::from_polar(1.0, self.phase.value(x)), lo, hi, tol)?;
        Ok(base + piece.value * sign)
    }
}

/// Optimiser diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub window: (f64, f64),
    pub achieved_tol: f64,
    pub truncation_bound: f64,
    pub extras: BTreeMap<String, f64>,
}

/// Output of an endpoint or parameter search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub params: Vec<f64>,
    pub objective: f64,
    pub endpoints: (f64, f64),
    pub diagnostics: Diagnostics,
}

/// Samples the antiderivative curve of `phase` at `samples` points of `window`.
pub fn trace_antiderivative(phase: &PhaseFunction, window: (f64, f64), samples: usize, tol: f64) -> Result<CurveTrace> {
    let (a, b) = window;
    check_interval(a, b)?;
    if samples < 2 {
        return Err(Error::InvalidArgument("a trace needs at least two samples".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let (sa, sb) = (phase.slope(a).abs(), phase.slope(b).abs());
    if sa < f64::EPSILON || sb < f64::EPSILON {
        return Err(Error::Precondition(format!(
            "|f'| vanishes at a window edge ({sa} at {a}, {sb} at {b})"
        )));
    }
    let step = (b - a) / (samples - 1) as f64;
    let parameters: Vec<f64> = (0..samples)
        .map(|i| if i == samples - 1 { b } else { a + step * i as f64 })
        .collect();
    let cells: Vec<Complex64> = parameters
        .par_windows(2)
        .map(|w| {
            integrate_complex(
                |x| Complex64::from_polar(1.0, phase.value(x)),
                w[0],
                w[1],
                (tol * (w[1] - w[0]) / (b - a)).max(1e-15),
            )
            .map(|r| r.value)
        })
        .collect::<Result<_>>()?;
    let mut points = Vec::with_capacity(samples);
    let mut acc = Complex64::new(0.0, 0.0);
    points.push(acc);
    for c in cells {
        acc += c;
        points.push(acc);
    }
    Ok(CurveTrace {
        parameters,
        points,
        truncation_bound: 2.0 / sa + 2.0 / sb,
        phase: phase.clone(),
        tol,
    })
}

/// Best sample pair `(value, i, j)` with `i < j`; ties go to the smaller `i`, then `j`.
fn best_pair(points: &[Complex64]) -> (f64, usize, usize) {
    let better = |x: (f64, usize, usize), y: (f64, usize, usize)| {
        if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
            y
        } else {
            x
        }
    };
    (0..points.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::NEG_INFINITY, i, i);
            for j in i + 1..points.len() {
                let d = (points[j] - points[i]).norm();
                best = better(best, (d, i, j));
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, usize::MAX, usize::MAX), better)
}

/// Diameter of the sampled curve, with both endpoints refined to `1e-8`.
///
/// `diagnostics.truncation_bound` carries the tail uncertainty; it is not
/// added to `objective`.
pub fn max_chord(trace: &CurveTrace) -> Result<SearchResult> {
    let n = trace.points.len();
    if n < 2 {
        return Err(Error::InvalidArgument("empty trace".into()));
    }
    let (coarse, i, j) = best_pair(&trace.points);
    let t = &trace.parameters;
    let bracket = |k: usize| (t[k.saturating_sub(1)], t[(k + 1).min(n - 1)]);
    let (ba, bb) = (bracket(i), bracket(j));

    let mut a = t[i];
    let mut b = t[j];
    let mut ga = trace.point_at(i, a)?;
    let mut gb = trace.point_at(j, b)?;
    let mut sweeps = 0;
    let mut moved = f64::INFINITY;
    // golden sections swallow errors; record the first one
    let failure = std::cell::RefCell::new(None);
    let eval = |k: usize, x: f64| match trace.point_at(k, x) {
        Ok(p) => p,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, f64::NAN)
        }
    };
    while sweeps < 40 && moved > 1e-9 {
        let ra = golden_max(|x| (gb - eval(i, x)).norm(), ba.0, ba.1, 1e-10);
        let new_a = ra.x;
        let new_ga = eval(i, new_a);
        let rb = golden_max(|x| (eval(j, x) - new_ga).norm(), bb.0, bb.1, 1e-10);
        let new_b = rb.x;
        moved = (new_a - a).abs().max((new_b - b).abs());
        a = new_a;
        b = new_b;
        ga = new_ga;
        gb = eval(j, b);
        sweeps += 1;
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let mut objective = (gb - ga).norm();
    if objective < coarse {
        // refinement never loses against the sampled pair
        a = t[i];
        b = t[j];
        objective = coarse;
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Ok(SearchResult {
        params: Vec::new(),
        objective,
        endpoints: (lo, hi),
        diagnostics: Diagnostics {
            iterations: sweeps,
            window: trace.window(),
            achieved_tol: moved,
            truncation_bound: trace.truncation_bound,
            extras: BTreeMap::from([("coarse_objective".to_string(), coarse)]),
        },
    })
}

/// Fresnel-based candidate for the sharp second-derivative constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConjectureResult {
    pub value: f64,
    pub theta: f64,
    pub iterations: usize,
}

/// `2√2 (cos θ, sin θ) · (C(u), S(u))` with `u = sqrt(π/2 + θ)` and
/// `C, S` the Fresnel integrals of `cos x²`, `sin x²`.
pub fn conjecture_objective(theta: f64, tol: f64) -> Result<f64> {
    let (c, s) = fresnel((FRAC_PI_2 + theta).sqrt(), tol)?;
    Ok(2.0 * SQRT_2 * (theta.cos() * c + theta.sin() * s))
}

/// Maximises [`conjecture_objective`] over `θ ∈ [0, 2π]`: a 1001-point scan,
/// then golden-section refinement to `tol` in `θ`.
pub fn conjectured_n2_constant(tol: f64) -> Result<ConjectureResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let quad_tol = (tol * 1e-3).clamp(1e-14, 1e-9);
    let failure = std::cell::RefCell::new(None);
    let objective = |theta: f64| match conjecture_objective(theta, quad_tol) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let r = scan_then_golden(objective, 0.0, TAU, 1001, tol);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(ConjectureResult {
        value: r.golden.value,
        theta: r.golden.x,
        iterations: r.golden.iterations,
    })
}

fn cubic_phase(a1: f64, a3: f64) -> PhaseFunction {
    PhaseFunction::from_polynomial(&Polynomial::new(vec![0.0, a1, 0.0, a3]))
}

/// Max chord of `a1 x + a3 x³` over `[-halfwidth, halfwidth]`.
pub fn cubic_chord(a1: f64, a3: f64, halfwidth: f64, samples: usize, tol: f64) -> Result<SearchResult> {
    let trace = trace_antiderivative(&cubic_phase(a1, a3), (-halfwidth, halfwidth), samples, tol)?;
    let mut r = max_chord(&trace)?;
    r.params = vec![a1, a3];
    Ok(r)
}

/// Scan range for `a1` with `a3 = 1`.
const A1_RANGE: (f64, f64) = (-3.0, -0.2);
const A1_SCAN_POINTS: usize = 29;

/// Searches the family `a1 x + x³`, `a1 < 0`, for the largest
/// endpoint-optimised integral.
///
/// `params = [a1*, 1, 1 / a1*³]`. The diagnostics carry the ratio, the
/// values `±(2/3)|a1*| sqrt(|a1*| / 3)` of the phase at its local extrema,
/// and the tail bound.
pub fn cubic_search(tol: f64, window_halfwidth: f64, samples: usize) -> Result<SearchResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if !(window_halfwidth > 0.0) {
        return Err(Error::InvalidArgument("window half-width must be positive".into()));
    }
    let quad_tol = (tol * 1e-3).clamp(1e-13, 1e-9);
    let failure = std::cell::RefCell::new(None);
    let objective = |a1: f64| match cubic_chord(a1, 1.0, window_halfwidth, samples, quad_tol) {
        Ok(r) => r.objective,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let scan = scan_then_golden(objective, A1_RANGE.0, A1_RANGE.1, A1_SCAN_POINTS, tol);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if scan.scan_index == 0 || scan.scan_index == scan.points - 1 {
        return Err(Error::WindowTooSmall(format!(
            "objective still increasing at the a1 scan boundary (best sample index {})",
            scan.scan_index
        )));
    }
    let a1 = scan.golden.x;
    let mut best = cubic_chord(a1, 1.0, window_halfwidth, samples, quad_tol)?;
    let ratio = 1.0 / (a1 * a1 * a1);
    let extremum = 2.0 / 3.0 * a1.abs() * (a1.abs() / 3.0).sqrt();
    best.params = vec![a1, 1.0, ratio];
    best.diagnostics.iterations = scan.golden.iterations;
    best.diagnostics.achieved_tol = scan.golden.bracket.1 - scan.golden.bracket.0;
    best.diagnostics.extras.insert("ratio".to_string(), ratio);
    best.diagnostics.extras.insert("phase_extremum".to_string(), extremum);
    best.diagnostics.extras.insert("a1".to_string(), a1);
    best.diagnostics
        .extras
        .insert("scan_points".to_string(), scan.points as f64);
    Ok(best)
}
