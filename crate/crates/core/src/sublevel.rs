//! Measure of sublevel sets `{x ∈ (a, b) : |f(x)| <= α}` and the sharp
//! estimate `|E| <= (n! 2^(2n-1))^(1/n) (α / λ)^(1/n)` when `|f^(n)| >= λ`.
//!
//! Sets are found by bracketing sign changes of `|f| - α` on a uniform grid
//! and bisecting each crossing to `1e-12`. Features narrower than the grid
//! spacing can be missed.

use serde::Serialize;

use crate::bounds::{sublevel_constant, BoundReport};
use crate::error::{check_interval, Error, Result};

pub const DEFAULT_GRID: usize = 100_000;

const CROSSING_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SublevelMeasurement {
    pub alpha: f64,
    /// Lower bound on `|f^(n)|`, when the measurement was made against one.
    pub lambda: Option<f64>,
    pub measure: f64,
    /// Disjoint, sorted `(left, right)` pieces.
    pub intervals: Vec<(f64, f64)>,
    pub resolution: usize,
}

fn crossing(inside: &impl Fn(f64) -> bool, mut lo: f64, mut hi: f64) -> f64 {
    let lo_state = inside(lo);
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inside(mid) == lo_state {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Measures `{x ∈ (a, b) : |f(x)| <= alpha}` on a grid of `grid` points.
pub fn measure_sublevel(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    alpha: f64,
    grid: usize,
) -> Result<SublevelMeasurement> {
    check_interval(a, b)?;
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    if grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points".into()));
    }
    let step = (b - a) / (grid - 1) as f64;
    let xs: Vec<f64> = (0..grid)
        .map(|i| if i == grid - 1 { b } else { a + step * i as f64 })
        .collect();
    let mut states = Vec::with_capacity(grid);
    for &x in &xs {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x, value: v });
        }
        states.push(v.abs() <= alpha);
    }
    let inside = |x: f64| f(x).abs() <= alpha;

    let mut intervals = Vec::new();
    let mut start = states[0].then_some(a);
    for i in 0..grid - 1 {
        if states[i] == states[i + 1] {
            continue;
        }
        let x = crossing(&inside, xs[i], xs[i + 1]);
        match start.take() {
            Some(s) => intervals.push((s, x)),
            None => start = Some(x),
        }
    }
    if let Some(s) = start {
        intervals.push((s, b));
    }
    let measure = intervals.iter().map(|(l, r)| r - l).sum();
    Ok(SublevelMeasurement {
        alpha,
        lambda: None,
        measure,
        intervals,
        resolution: grid,
    })
}

/// `(n! 2^(2n-1))^(1/n) (alpha / lambda)^(1/n)`.
pub fn sublevel_bound(n: usize, alpha: f64, lambda: f64) -> Result<f64> {
    if n == 0 || !(alpha > 0.0) || !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sublevel bound needs n >= 1, alpha > 0, lambda > 0 (got {n}, {alpha}, {lambda})"
        )));
    }
    Ok(sublevel_constant(n) * (alpha / lambda).powf(1.0 / n as f64))
}

/// Measures the sublevel set and compares it with [`sublevel_bound`].
///
/// If `nth_derivative` is given, `|f^(n)| >= lambda (1 - 1e-9)` is
/// spot-checked on the same grid first.
#[allow(clippy::too_many_arguments)]
pub fn verify_sublevel(
    f: impl Fn(f64) -> f64,
    nth_derivative: Option<&dyn Fn(f64) -> f64>,
    n: usize,
    a: f64,
    b: f64,
    alpha: f64,
    lambda: f64,
    grid: usize,
) -> Result<(BoundReport, SublevelMeasurement)> {
    let bound = sublevel_bound(n, alpha, lambda)?;
    if let Some(d) = nth_derivative {
        check_interval(a, b)?;
        let step = (b - a) / (grid.max(2) - 1) as f64;
        for i in 0..grid.max(2) {
            let x = a + step * i as f64;
            let v = d(x).abs();
            if v < lambda * (1.0 - 1e-9) {
                return Err(Error::Precondition(format!(
                    "|f^({n})({x})| = {v} is below lambda = {lambda}"
                )));
            }
        }
    }
    let mut m = measure_sublevel(f, a, b, alpha, grid)?;
    m.lambda = Some(lambda);
    let report = BoundReport::upper("sublevel set estimate", bound, m.measure)
        .detail("alpha", alpha)
        .detail("lambda", lambda)
        .detail("n", n as f64)
        .detail("pieces", m.intervals.len() as f64);
    Ok((report, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev;

    #[test]
    fn identity_on_symmetric_interval() {
        let m = measure_sublevel(|x| x, -1.0, 1.0, 0.5, 10_001).unwrap();
        assert!((m.measure - 1.0).abs() < 1e-11);
        assert_eq!(m.intervals.len(), 1);
        assert!((m.intervals[0].0 + 0.5).abs() < 1e-11 && (m.intervals[0].1 - 0.5).abs() < 1e-11);
    }

    #[test]
    fn chebyshev_fills_interval() {
        let t3 = chebyshev(3);
        let m = measure_sublevel(|x| t3.eval(x), -1.0, 1.0, 1.0, DEFAULT_GRID).unwrap();
        assert!((m.measure - 2.0).abs() < 1e-9);
    }

    #[test]
    fn shifted_parabola_has_two_pieces() {
        let m = measure_sublevel(|x| x * x - 0.5, -2.0, 2.0, 0.25, DEFAULT_GRID).unwrap();
        let expected = 2.0 * (0.75f64.sqrt() - 0.5);
        assert!((m.measure - expected).abs() < 1e-10);
        assert_eq!(m.intervals.len(), 2);
    }

    #[test]
    fn bound_examples() {
        assert!((sublevel_bound(1, 3.0, 3.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((sublevel_bound(2, 1.0, 1.0).unwrap() - 4.0).abs() < 1e-12);
        assert!((sublevel_bound(3, 1.0, 24.0).unwrap() - 2.0).abs() < 1e-12);
        assert!(sublevel_bound(0, 1.0, 1.0).is_err());
        assert!(sublevel_bound(2, 0.0, 1.0).is_err());
    }

    #[test]
    fn verify_examples() {
        for n in 2..=4usize {
            let t = chebyshev(n);
            let lambda: f64 = (1..=n).map(|k| k as f64).product::<f64>() * 2f64.powi(n as i32 - 1);
            let (r, _) = verify_sublevel(|x| t.eval(x), None, n, -1.0, 1.0, 1.0, lambda, DEFAULT_GRID).unwrap();
            assert!(r.pass);
            assert!(r.margin.unwrap().abs() < 1e-9);
        }

        let lambda = 5.0;
        let (r, _) = verify_sublevel(
            |x| lambda * x,
            Some(&|_| lambda),
            1,
            0.0,
            1.0,
            lambda / 4.0,
            lambda,
            10_001,
        )
        .unwrap();
        assert!((r.measured.unwrap() - 0.25).abs() < 1e-11);
        assert!((r.bound - 0.5).abs() < 1e-12);

        // |x^3| <= 0.1 on (-1, 1): measure 2 * 0.1^(1/3), bound (192 * 0.1 / 6)^(1/3)
        let (r, _) = verify_sublevel(|x| x * x * x, Some(&|_| 6.0), 3, -1.0, 1.0, 0.1, 6.0, DEFAULT_GRID).unwrap();
        let exact = 2.0 * 0.1f64.powf(1.0 / 3.0);
        assert!((r.measured.unwrap() - exact).abs() < 1e-10);
        assert!((r.bound - 3.2f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn derivative_spot_check_fails_fast() {
        let err = verify_sublevel(|x| x * x, Some(&|_| 2.0), 2, -1.0, 1.0, 0.1, 3.0, 1000).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn non_finite_values_rejected() {
        assert!(matches!(
            measure_sublevel(|x| 1.0 / x, -1.0, 1.0, 0.5, 3),
            Err(Error::NonFinite { .. })
        ));
    }
}
