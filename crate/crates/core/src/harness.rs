//! Reproduction harness: every reference number the library is expected to
//! reproduce, as gated checks, plus non-gating discrepancy audits where a
//! printed value disagrees with the computation.

use std::f64::consts::{E, FRAC_PI_6, PI};

use serde::Serialize;

use crate::bounds::{
    asymptotic_sharpness_check, n2_printed_dot_objective_max, n2_theta_optimum, poly_corollary_constant,
    sharpness_upper, sublevel_constant, vdc_constant,
};
use crate::divdiff::{minimal_node_sum, uniqueness_probe};
use crate::error::Result;
use crate::extremal::{conjectured_n2_constant, cubic_search};
use crate::osc::{fuzz_first_vdc, oscillatory_integral, verify_first_vdc, verify_riemann_lebesgue, PhaseFunction};
use crate::poly::{chebyshev, chebyshev_extrema, Polynomial};
use crate::sublevel::verify_sublevel;

/// Settings for [`run_all`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessOptions {
    pub tol: f64,
    pub grid: usize,
    pub seed: u64,
    /// Id of a check whose reference value is perturbed so that it fails.
    pub fault: Option<String>,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            grid: crate::sublevel::DEFAULT_GRID,
            seed: 1,
            fault: None,
        }
    }
}

/// One gated comparison `|value - expected| <= tolerance`, or a one-sided
/// comparison when `kind` says so.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: String,
    pub title: String,
    pub kind: CheckKind,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `|value - expected| <= tolerance`.
    Equal,
    /// `value <= expected + tolerance`.
    AtMost,
    /// `value >= expected - tolerance`.
    AtLeast,
}

/// A printed value that the computation does not reproduce. Never gates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub id: String,
    pub title: String,
    pub printed: f64,
    pub computed: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
    pub discrepancies: Vec<Discrepancy>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Checks<'a> {
    opts: &'a HarnessOptions,
    out: Vec<CheckOutcome>,
}

impl Checks<'_> {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        id: &str,
        title: &str,
        kind: CheckKind,
        value: f64,
        expected: f64,
        tolerance: f64,
        detail: String,
    ) {
        let expected = match (self.opts.fault.as_deref() == Some(id), kind) {
            (false, _) => expected,
            (true, CheckKind::Equal) => 0.5 * expected,
            (true, CheckKind::AtMost) => 0.5 * expected - 1.0,
            (true, CheckKind::AtLeast) => 2.0 * expected + 1.0,
        };
        let pass = match kind {
            CheckKind::Equal => (value - expected).abs() <= tolerance,
            CheckKind::AtMost => value <= expected + tolerance,
            CheckKind::AtLeast => value >= expected - tolerance,
        };
        self.out.push(CheckOutcome {
            id: id.to_string(),
            title: title.to_string(),
            kind,
            value,
            expected,
            tolerance,
            pass,
            detail,
        });
    }
}

/// Ids of every gated check, in report order.
pub const CHECK_IDS: &[&str] = &[
    "quadratic-integral",
    "cubic-integral",
    "quadratic-above-asymptote",
    "cubic-above-asymptote",
    "minimal-node-identity",
    "node-uniqueness",
    "sublevel-equality",
    "vdc-constant-maximum",
    "corollary-constant-ceiling",
    "sublevel-constant-ceiling",
    "vdc-constant-limit",
    "corollary-constant-limit",
    "first-derivative-equality",
    "first-derivative-fuzz",
    "sharpness-sandwich",
    "split-estimate-angle",
    "split-estimate-constant",
    "fourier-coefficient-bound",
    "conjectured-constant",
    "cubic-ratio",
    "cubic-objective",
];

/// Runs every check and audit.
pub fn run_all(opts: &HarnessOptions) -> Result<VerificationReport> {
    let tol = opts.tol;
    // checks pinned at 1e-4 widen with a loose --tol
    let widen = |t: f64| t.max(tol);
    let quad_tol = tol.min(1e-6);
    let mut c = Checks { opts, out: Vec::new() };
    let mut discrepancies = Vec::new();

    let quadratic = PhaseFunction::from_polynomial(&Polynomial::new(vec![0.0, 0.0, 0.5]));
    let q = oscillatory_integral(&quadratic, -2.0, 2.0, quad_tol)?;
    let cubic = PhaseFunction::from_polynomial(&Polynomial::new(vec![0.0, -1.0, 0.0, 1.0 / 6.0]));
    let k = oscillatory_integral(&cubic, -3.0, 3.0, quad_tol)?;
    c.push(
        "quadratic-integral",
        "|∫_{-2}^{2} e^{ix²/2} dx|",
        CheckKind::Equal,
        q.modulus,
        3.33346,
        widen(1e-4),
        format!("quadrature error estimate {:e}", q.error_estimate),
    );
    c.push(
        "cubic-integral",
        "|∫_{-3}^{3} e^{i(x³/6 - x)} dx|",
        CheckKind::Equal,
        k.modulus,
        4.61932,
        widen(1e-4),
        format!("quadrature error estimate {:e}", k.error_estimate),
    );
    c.push(
        "quadratic-above-asymptote",
        "quadratic integral exceeds 2 · 4/e",
        CheckKind::AtLeast,
        q.modulus,
        2.0 * 4.0 / E,
        0.0,
        String::new(),
    );
    c.push(
        "cubic-above-asymptote",
        "cubic integral exceeds 3 · 4/e",
        CheckKind::AtLeast,
        k.modulus,
        3.0 * 4.0 / E,
        0.0,
        String::new(),
    );

    let mut worst = 0.0f64;
    for n in 1..=15usize {
        let s = minimal_node_sum(&chebyshev_extrema(n)?)?;
        let target = 2f64.powi(n as i32 - 1);
        worst = worst.max((s / target - 1.0).abs());
    }
    c.push(
        "minimal-node-identity",
        "weight sum at Chebyshev extrema equals 2^(n-1), 1 <= n <= 15 (max relative error)",
        CheckKind::AtMost,
        worst,
        1e-8,
        0.0,
        String::new(),
    );
    let probe = uniqueness_probe(3, 2000, 0.05, opts.seed)?;
    c.push(
        "node-uniqueness",
        "random node sets never beat the Chebyshev extrema (n = 3, violations)",
        CheckKind::AtMost,
        probe.details["violations"],
        0.0,
        0.0,
        format!(
            "smallest sum away from the extrema {}",
            probe.measured.unwrap_or(f64::NAN)
        ),
    );

    let mut worst_measure = 0.0f64;
    let mut worst_gap = 0.0f64;
    for n in 2..=6usize {
        let t = chebyshev(n);
        let lambda = (1..=n).map(|k| k as f64).product::<f64>() * 2f64.powi(n as i32 - 1);
        let (r, m) = verify_sublevel(|x| t.eval(x), None, n, -1.0, 1.0, 1.0, lambda, opts.grid)?;
        worst_measure = worst_measure.max((m.measure - 2.0).abs());
        worst_gap = worst_gap.max((r.bound - m.measure).abs());
    }
    c.push(
        "sublevel-equality",
        "sublevel estimate is attained by T_n, 2 <= n <= 6 (max |bound - measure|)",
        CheckKind::AtMost,
        worst_gap,
        1e-6,
        0.0,
        format!("max |measure - 2| = {worst_measure:e}"),
    );

    let range = 2..=1000usize;
    let (arg_vdc, max_vdc) = range
        .clone()
        .map(|n| (n, vdc_constant(n)))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    c.push(
        "vdc-constant-maximum",
        "van der Corput constant never exceeds 2^(5/3), 2 <= n <= 1000",
        CheckKind::AtMost,
        max_vdc,
        2f64.powf(5.0 / 3.0),
        1e-12,
        format!("maximum at n = {arg_vdc}"),
    );
    let (arg_cor, max_cor) = range
        .clone()
        .map(|n| (n, poly_corollary_constant(n)))
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    c.push(
        "corollary-constant-ceiling",
        "polynomial constant stays below 5.5, 2 <= n <= 1000",
        CheckKind::AtMost,
        max_cor,
        5.5,
        0.0,
        format!("maximum at n = {arg_cor}"),
    );
    let worst_ratio = range
        .clone()
        .map(|n| sublevel_constant(n) / (2 * n) as f64)
        .fold(0.0, f64::max);
    c.push(
        "sublevel-constant-ceiling",
        "sublevel constant is at most 2n, 2 <= n <= 1000 (max C_n / 2n)",
        CheckKind::AtMost,
        worst_ratio,
        1.0,
        1e-12,
        String::new(),
    );
    let far = 100_000usize;
    c.push(
        "vdc-constant-limit",
        "van der Corput constant approaches 4/e (n = 10^5)",
        CheckKind::Equal,
        vdc_constant(far),
        4.0 / E,
        1e-3,
        String::new(),
    );
    c.push(
        "corollary-constant-limit",
        "polynomial constant approaches 4 (n = 10^5)",
        CheckKind::Equal,
        poly_corollary_constant(far),
        4.0,
        1e-3,
        String::new(),
    );

    let linear = PhaseFunction::from_polynomial(&Polynomial::new(vec![0.0, 1.0]));
    let eq = verify_first_vdc(&linear, 0.0, PI, 1.0, quad_tol.min(1e-10))?;
    c.push(
        "first-derivative-equality",
        "f(x) = x on (0, π) attains the first-derivative bound",
        CheckKind::Equal,
        eq.measured.unwrap_or(f64::NAN),
        eq.bound,
        widen(1e-8),
        format!("bound {}", eq.bound),
    );
    let fuzz = fuzz_first_vdc(500, opts.seed, quad_tol)?;
    c.push(
        "first-derivative-fuzz",
        "500 random convex phases respect (1 + sin(θ - f(a))) / λ (violations)",
        CheckKind::AtMost,
        fuzz.violations as f64,
        0.0,
        0.0,
        format!("worst margin {:e}", fuzz.worst_margin),
    );

    let mut sandwich_fail = 0usize;
    let mut n20_upper = f64::NAN;
    for n in [2usize, 5, 10, 20] {
        let r = asymptotic_sharpness_check(n, 1e-6)?;
        if !r.pass {
            sandwich_fail += 1;
        }
        if n == 20 {
            n20_upper = r.details["upper"];
        }
    }
    c.push(
        "sharpness-sandwich",
        "|∫_{-1}^{1} e^{iT_n/n}| lies in its sandwich, n ∈ {2, 5, 10, 20} (failures)",
        CheckKind::AtMost,
        sandwich_fail as f64,
        0.0,
        0.0,
        String::new(),
    );

    let opt = n2_theta_optimum();
    c.push(
        "split-estimate-angle",
        "worst split angle of the second-derivative estimate is π/6",
        CheckKind::Equal,
        opt.theta,
        FRAC_PI_6,
        1e-6,
        format!("optimal α {}", opt.alpha),
    );
    c.push(
        "split-estimate-constant",
        "second-derivative constant 2 · 3^(3/4)",
        CheckKind::Equal,
        opt.value,
        2.0 * 3f64.powf(0.75),
        1e-6,
        String::new(),
    );

    let rl = verify_riemann_lebesgue(|x| x, 1, quad_tol.min(1e-12))?;
    c.push(
        "fourier-coefficient-bound",
        "|f̂(1)| <= (1 + sin θ)/(2π) for f(x) = x",
        CheckKind::AtMost,
        rl.measured.unwrap_or(f64::NAN),
        rl.bound,
        1e-9,
        format!("margin {}", rl.margin.unwrap_or(f64::NAN)),
    );
    discrepancies.push(Discrepancy {
        id: "fourier-coefficient-sign".to_string(),
        title: "Fourier coefficient bound with (1 - sin θ) for f(x) = x, n = 1".to_string(),
        printed: rl.details["printed_bound"],
        computed: rl.details["modulus"],
        note: format!(
            "(1 - sin θ) bound is {:.12} but |f̂(1)| = {:.12}; (1 + sin θ) bound {:.12} holds with margin {:.12}",
            rl.details["printed_bound"],
            rl.details["modulus"],
            rl.bound,
            rl.margin.unwrap_or(f64::NAN)
        ),
    });

    let search_tol = tol.clamp(1e-8, 1e-4);
    let conj = conjectured_n2_constant(search_tol)?;
    c.push(
        "conjectured-constant",
        "conjectured sharp second-derivative constant ≈ 3.3643",
        CheckKind::Equal,
        conj.value,
        3.3643,
        5e-4,
        format!("θ* = {}", conj.theta),
    );

    let cubic_tol = tol.clamp(1e-7, 1e-4);
    let search = cubic_search(cubic_tol, 6.0, 1201)?;
    let ratio = search.params[2];
    c.push(
        "cubic-ratio",
        "extremal cubic ratio a_3 / a_1^3",
        CheckKind::Equal,
        ratio,
        -0.3547,
        1e-3,
        format!("a_1* = {}", search.params[0]),
    );
    c.push(
        "cubic-objective",
        "extremal cubic integral, normalised",
        CheckKind::Equal,
        search.objective,
        2.6396,
        1e-3,
        format!("tail bound {:e}", search.diagnostics.truncation_bound),
    );

    let extremum = search.diagnostics.extras["phase_extremum"];
    discrepancies.push(Discrepancy {
        id: "cubic-extremum-values".to_string(),
        title: "local extremum values of the extremal cubic".to_string(),
        printed: 0.5935,
        computed: extremum,
        note: format!(
            "phase a_1 x + x³ at a_1 = {:.6} has local extrema ±{extremum:.6}",
            search.params[0]
        ),
    });
    let (dot_theta, dot_value) = n2_printed_dot_objective_max();
    discrepancies.push(Discrepancy {
        id: "split-estimate-dot-form".to_string(),
        title: "square-root dot-product form of the split estimate".to_string(),
        printed: 2.0 * 3f64.powf(0.75),
        computed: dot_value,
        note: format!(
            "2 sqrt((cos θ, sin θ) · (1, sin θ)) peaks at θ = {dot_theta:.9} with value {dot_value:.9}; the split estimate itself peaks at π/6 with {:.9}",
            opt.value
        ),
    });
    let n = 1000usize;
    let gap = sublevel_constant(n) - 4.0 * n as f64 / E;
    discrepancies.push(Discrepancy {
        id: "sublevel-constant-gap".to_string(),
        title: "sublevel constant minus 4n/e at n = 1000".to_string(),
        printed: 0.0,
        computed: gap,
        note: "the ratio to 4n/e tends to 1 but the difference grows like (2/e) ln n".to_string(),
    });
    let n = 10_000usize;
    discrepancies.push(Discrepancy {
        id: "vdc-constant-rate".to_string(),
        title: "van der Corput constant minus 4/e at n = 10^4".to_string(),
        printed: 0.0,
        computed: vdc_constant(n) - 4.0 / E,
        note: "within 1e-3 of 4/e only from about n = 3·10^4".to_string(),
    });
    discrepancies.push(Discrepancy {
        id: "sandwich-width-n20".to_string(),
        title: "upper end of the T_n/n sandwich minus 2 at n = 20".to_string(),
        printed: 0.15,
        computed: n20_upper - 2.0,
        note: format!("upper end {:.9} = {:.9}", n20_upper, sharpness_upper(20)),
    });

    let all_pass = c.out.iter().all(|x| x.pass);
    Ok(VerificationReport {
        checks: c.out,
        discrepancies,
        all_pass,
    })
}
