//! Sharp constants for van der Corput and sublevel-set estimates, with the
//! numerical machinery to reproduce and audit them: exact Chebyshev
//! polynomials, divided differences, sublevel measurement, adaptive
//! oscillatory quadrature and endpoint-optimal integral searches.

// `!(x > 0.0)` is deliberate: NaN must fail positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod divdiff;
pub mod error;
pub mod extremal;
pub mod harness;
pub mod optimize;
pub mod osc;
pub mod poly;
pub mod sublevel;

pub use bounds::{BoundReport, Direction};
pub use error::{Error, Result};
pub use extremal::{CurveTrace, SearchResult};
pub use num_complex::Complex64;
pub use osc::{IntegralResult, PhaseFunction};
pub use poly::{NodeSet, Polynomial};
pub use sublevel::SublevelMeasurement;
