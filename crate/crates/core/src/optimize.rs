//! One-dimensional derivative-free maximisation.

use serde::Serialize;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Output of a golden-section search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GoldenResult {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
    /// Final bracket `(lo, hi)`.
    pub bracket: (f64, f64),
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> GoldenResult {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > tol && iterations < 500 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        iterations += 1;
    }
    let (x, value) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    GoldenResult {
        x,
        value,
        iterations,
        bracket: (lo, hi),
    }
}

/// Golden-section search for a minimum.
pub fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> GoldenResult {
    let mut r = golden_max(|x| -f(x), lo, hi, tol);
    r.value = -r.value;
    r
}

/// Outcome of [`scan_then_golden`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub golden: GoldenResult,
    /// Index of the best scan point among `points` samples.
    pub scan_index: usize,
    pub points: usize,
}

/// Uniform scan of `points` samples on `[lo, hi]` followed by golden-section
/// refinement inside the cells adjacent to the best sample.
pub fn scan_then_golden(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize, tol: f64) -> ScanResult {
    let points = points.max(3);
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..points {
        let v = f(lo + step * i as f64);
        if v > best.1 {
            best = (i, v);
        }
    }
    let i = best.0;
    let left = lo + step * i.saturating_sub(1) as f64;
    let right = (lo + step * (i + 1) as f64).min(hi);
    let mut golden = golden_max(&f, left, right, tol);
    if golden.value < best.1 {
        golden.x = lo + step * i as f64;
        golden.value = best.1;
    }
    ScanResult {
        golden,
        scan_index: i,
        points,
    }
}
