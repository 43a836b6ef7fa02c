//! Fixtures shared by the benchmarks.

use corput::poly::Polynomial;
use corput::PhaseFunction;

/// `x²/2`, the quadratic reference phase.
pub fn quadratic_phase() -> PhaseFunction {
    PhaseFunction::from_polynomial(&Polynomial::new(vec![0.0, 0.0, 0.5]))
}

/// `x³/6 - x`.
pub fn cubic_phase() -> PhaseFunction {
    PhaseFunction::from_polynomial(&Polynomial::new(vec![0.0, -1.0, 0.0, 1.0 / 6.0]))
}

/// `a1 x + x³` near the extremal ratio.
pub fn extremal_cubic_phase() -> PhaseFunction {
    PhaseFunction::from_polynomial(&Polynomial::new(vec![0.0, -1.4127, 0.0, 1.0]))
}
