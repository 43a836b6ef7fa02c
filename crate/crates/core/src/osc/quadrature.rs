//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_interval, Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Limits on the adaptive subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureOptions {
    pub max_depth: u32,
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            max_depth: 60,
            max_panels: 1_000_000,
        }
    }
}

/// A complex integral with its polar form and error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: Complex64,
    pub modulus: f64,
    /// Argument in `(-π, π]`.
    pub argument: f64,
    /// Sum of the per-panel `|K15 - G7|` differences.
    pub error_estimate: f64,
    pub panels: usize,
}

impl IntegralResult {
    pub fn from_value(value: Complex64, error_estimate: f64, panels: usize) -> Self {
        let mut argument = value.arg();
        if argument <= -std::f64::consts::PI {
            argument = std::f64::consts::PI;
        }
        Self {
            value,
            modulus: value.norm(),
            argument,
            error_estimate,
            panels,
        }
    }
}

/// Kronrod estimate, `|K - G|`, and the Kronrod rule applied to `|f|`.
fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.norm() * WGK[7];
    for i in 0..7 {
        let dx = half * XGK[i];
        let (fl, fr) = (f(centre - dx), f(centre + dx));
        let pair = fl + fr;
        kronrod += pair * WGK[i];
        abs_sum += (fl.norm() + fr.norm()) * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    let k = kronrod * half;
    let g = gauss * half;
    (k, (k - g).norm(), abs_sum * half.abs())
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// A panel is accepted once `|K15 - G7|` drops below its share
/// `tol * len / (b - a)` of the budget, or below the rounding floor of the
/// panel. Accepted panels are summed left to right.
pub fn integrate_complex(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    integrate_complex_with(f, a, b, tol, QuadratureOptions::default())
}

pub fn integrate_complex_with(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
    opts: QuadratureOptions,
) -> Result<IntegralResult> {
    check_interval(a, b)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let width = b - a;
    let mut total = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut panels = 0usize;
    // left-most panel on top, so acceptance order is left to right
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (k, err, abs_k) = gk15(&f, lo, hi);
        if !(k.re.is_finite() && k.im.is_finite()) {
            return Err(Error::NonFinite {
                x: 0.5 * (lo + hi),
                value: k.norm(),
            });
        }
        let budget = tol * (hi - lo) / width;
        let floor = 50.0 * f64::EPSILON * abs_k;
        if err <= budget || err <= floor {
            total += k;
            error += err;
            panels += 1;
            if panels > opts.max_panels {
                return Err(Error::NonConvergence(format!(
                    "panel budget {} exhausted",
                    opts.max_panels
                )));
            }
            continue;
        }
        if depth >= opts.max_depth {
            return Err(Error::NonConvergence(format!(
                "depth cap {} reached on [{lo}, {hi}] with error {err:e}",
                opts.max_depth
            )));
        }
        let mid = 0.5 * (lo + hi);
        stack.push((mid, hi, depth + 1));
        stack.push((lo, mid, depth + 1));
        if stack.len() > opts.max_panels {
            return Err(Error::NonConvergence(format!(
                "panel budget {} exhausted",
                opts.max_panels
            )));
        }
    }
    Ok(IntegralResult::from_value(total, error, panels))
}

/// Real-valued convenience wrapper.
pub fn integrate_real(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, tol)?;
    Ok((r.value.re, r.error_estimate))
}
