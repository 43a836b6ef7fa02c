//! Constructive complex second mean value theorem.
//!
//! For monotone real `f`, continuous complex `g` and `I = ∫_a^b f g = |I| e^{iθ}`
//! there is `c ∈ [a, b]` with
//!
//! ```text
//! |I| = f(a) Re(e^{-iθ} ∫_a^c g) + f(b) Re(e^{-iθ} ∫_c^b g).
//! ```
//!
//! When `f` has constant sign and `|f|` decreases, `f(b)` may be replaced by
//! zero. The point is located by scanning the residual for a sign change and
//! bisecting.

use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::{integrate_complex, IntegralResult};
use crate::error::{check_interval, Error, Result};

/// Which identity to solve for `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MvtForm {
    /// Both endpoint values of a monotone `f`.
    TwoSided,
    /// Only `f(a)`, for `f` of constant sign with `|f|` decreasing.
    LeftEndpoint,
}

/// A mean value point and the integral it decomposes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MvtPoint {
    pub c: f64,
    /// `|RHS(c) - |I||`.
    pub residual: f64,
    pub integral: IntegralResult,
}

const SCAN_LEVELS: [usize; 3] = [1_000, 10_000, 100_000];
const MONOTONE_GRID: usize = 1_000;

fn check_monotone(f: &impl Fn(f64) -> f64, a: f64, b: f64, form: MvtForm) -> Result<()> {
    let step = (b - a) / (MONOTONE_GRID - 1) as f64;
    let values: Vec<f64> = (0..MONOTONE_GRID).map(|i| f(a + step * i as f64)).collect();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let slack = 1e-12 * scale;
    let nondecreasing = values.windows(2).all(|w| w[1] >= w[0] - slack);
    let nonincreasing = values.windows(2).all(|w| w[1] <= w[0] + slack);
    match form {
        MvtForm::TwoSided if nondecreasing || nonincreasing => Ok(()),
        MvtForm::TwoSided => Err(Error::Precondition("f is not monotone on the grid".into())),
        MvtForm::LeftEndpoint => {
            let abs_decreasing = values.windows(2).all(|w| w[1].abs() <= w[0].abs() + slack);
            let one_sign = values.iter().all(|&v| v >= -slack) || values.iter().all(|&v| v <= slack);
            if abs_decreasing && one_sign {
                Ok(())
            } else {
                Err(Error::Precondition(
                    "f must have constant sign with |f| decreasing".into(),
                ))
            }
        }
    }
}

/// Finds `c` with residual below `tol`.
pub fn complex_mvt_point(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
    form: MvtForm,
) -> Result<MvtPoint> {
    check_interval(a, b)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    check_monotone(&f, a, b, form)?;
    let quad_tol = (tol * 1e-3).max(1e-15);
    let integral = integrate_complex(|x| f(x) * g(x), a, b, quad_tol)?;
    let rotation = Complex64::from_polar(1.0, -integral.argument);
    let target = integral.modulus;
    let fa = f(a);
    let fb = match form {
        MvtForm::TwoSided => f(b),
        MvtForm::LeftEndpoint => 0.0,
    };

    let scan_tol = quad_tol;
    let total = integrate_complex(&g, a, b, scan_tol)?.value;
    let total_re = (rotation * total).re;
    // residual as a function of the rotated partial integral R(c)
    let residual = |partial_re: f64| fa * partial_re + fb * (total_re - partial_re) - target;

    for &points in &SCAN_LEVELS {
        let step = (b - a) / points as f64;
        let mut partial = Complex64::new(0.0, 0.0);
        let mut prev_c = a;
        let mut prev_h = residual(0.0);
        if prev_h.abs() < tol {
            return Ok(MvtPoint {
                c: a,
                residual: prev_h.abs(),
                integral,
            });
        }
        for i in 1..=points {
            let c = if i == points { b } else { a + step * i as f64 };
            partial += integrate_complex(&g, prev_c, c, scan_tol * (c - prev_c) / (b - a))?.value;
            let h = residual((rotation * partial).re);
            if h.abs() < tol {
                return Ok(MvtPoint {
                    c,
                    residual: h.abs(),
                    integral,
                });
            }
            if h.signum() != prev_h.signum() {
                let base = partial - integrate_complex(&g, prev_c, c, scan_tol * (c - prev_c) / (b - a))?.value;
                return bisect(
                    &g, &residual, rotation, base, prev_c, c, prev_h, tol, scan_tol, integral,
                );
            }
            prev_c = c;
            prev_h = h;
        }
    }
    Err(Error::Verification(format!(
        "no mean value point found at resolution {}; check monotonicity of f and the tolerance",
        SCAN_LEVELS[SCAN_LEVELS.len() - 1]
    )))
}

#[allow(clippy::too_many_arguments)]
fn bisect(
    g: &impl Fn(f64) -> Complex64,
    residual: &impl Fn(f64) -> f64,
    rotation: Complex64,
    base: Complex64,
    mut lo: f64,
    mut hi: f64,
    h_lo: f64,
    tol: f64,
    quad_tol: f64,
    integral: IntegralResult,
) -> Result<MvtPoint> {
    let anchor = lo;
    let eval = |c: f64| -> Result<f64> {
        let piece = if c > anchor {
            integrate_complex(g, anchor, c, quad_tol)?.value
        } else {
            Complex64::new(0.0, 0.0)
        };
        Ok(residual((rotation * (base + piece)).re))
    };
    let sign_lo = h_lo.signum();
    let mut best = (lo, h_lo.abs());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let h = eval(mid)?;
        if h.abs() < best.1 {
            best = (mid, h.abs());
        }
        if h.abs() < 0.1 * tol {
            break;
        }
        if h.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if best.1 < tol {
        Ok(MvtPoint {
            c: best.0,
            residual: best.1,
            integral,
        })
    } else {
        Err(Error::Verification(format!(
            "bisection stalled at c = {} with residual {:e}",
            best.0, best.1
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rhs(
        f: &impl Fn(f64) -> f64,
        g: &impl Fn(f64) -> Complex64,
        a: f64,
        b: f64,
        c: f64,
        theta: f64,
        form: MvtForm,
    ) -> f64 {
        let rot = Complex64::from_polar(1.0, -theta);
        let left = if c > a {
            integrate_complex(g, a, c, 1e-14).unwrap().value
        } else {
            Complex64::new(0.0, 0.0)
        };
        let right = if c < b {
            integrate_complex(g, c, b, 1e-14).unwrap().value
        } else {
            Complex64::new(0.0, 0.0)
        };
        let fb = if form == MvtForm::TwoSided { f(b) } else { 0.0 };
        f(a) * (rot * left).re + fb * (rot * right).re
    }

    #[test]
    fn constant_weight_accepts_any_point() {
        let g = |x: f64| Complex64::new(x.cos(), x * x);
        let p = complex_mvt_point(|_| 1.0, g, 0.0, 2.0, 1e-9, MvtForm::TwoSided).unwrap();
        assert!(p.residual < 1e-9);
        assert!((0.0..=2.0).contains(&p.c));
    }

    #[test]
    fn reciprocal_weight_against_unit_circle() {
        let f = |x: f64| 1.0 / x;
        let g = |x: f64| Complex64::from_polar(1.0, x);
        let p = complex_mvt_point(f, g, 1.0, 2.0, 1e-9, MvtForm::TwoSided).unwrap();
        let check = rhs(&f, &g, 1.0, 2.0, p.c, p.integral.argument, MvtForm::TwoSided);
        assert!((check - p.integral.modulus).abs() < 1e-9);
    }

    #[test]
    fn left_endpoint_form_for_decaying_weight() {
        let f = |x: f64| (-x).exp();
        let g = |x: f64| Complex64::from_polar(1.0, x);
        let p = complex_mvt_point(f, g, 0.0, 4.0, 1e-9, MvtForm::LeftEndpoint).unwrap();
        let check = rhs(&f, &g, 0.0, 4.0, p.c, p.integral.argument, MvtForm::LeftEndpoint);
        assert!((check - p.integral.modulus).abs() < 1e-9);
        assert!(p.integral.modulus <= (f(0.0) * integrate_complex(g, 0.0, p.c, 1e-14).unwrap().modulus) + 1e-9);
    }

    #[test]
    fn preconditions_are_spot_checked() {
        let g = |x: f64| Complex64::from_polar(1.0, x);
        assert!(matches!(
            complex_mvt_point(f64::sin, g, 0.0, 4.0, 1e-9, MvtForm::TwoSided),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            complex_mvt_point(|x| x, g, 0.0, 4.0, 1e-9, MvtForm::LeftEndpoint),
            Err(Error::Precondition(_))
        ));
    }
}
