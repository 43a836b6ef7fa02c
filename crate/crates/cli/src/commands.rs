use anyhow::{anyhow, bail, Result};
use serde_json::{json, Value};

use corput::bounds::{constants_table, BoundReport};
use corput::divdiff::{divided_difference, mean_value_coefficients, minimal_node_sum, uniqueness_probe};
use corput::extremal::{conjectured_n2_constant, cubic_search};
use corput::harness::{run_all, HarnessOptions, CHECK_IDS};
use corput::optimize::golden_min;
use corput::osc::{complex_mvt_point, oscillatory_integral, verify_riemann_lebesgue, MvtForm};
use corput::poly::{chebyshev, chebyshev_extrema, NodeSet, Polynomial};
use corput::sublevel::verify_sublevel;
use corput::{Complex64, PhaseFunction};

use crate::args::{Command, Global, MvtFormArg, PolySource};
use crate::UsageError;

/// What a subcommand produced.
pub struct Outcome {
    pub results: Value,
    pub discrepancies: Vec<Value>,
    /// Descriptions of failed gated checks.
    pub failures: Vec<String>,
    /// A dedicated CSV layout, when the command has one.
    pub table: Option<(Vec<String>, Vec<Vec<Value>>)>,
}

impl Outcome {
    fn plain(results: Value) -> Self {
        Self {
            results,
            discrepancies: Vec::new(),
            failures: Vec::new(),
            table: None,
        }
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a < b) {
        return Err(usage(format!("interval needs from < to, got [{a}, {b}]")));
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn report_value(r: &BoundReport) -> Result<Value> {
    to_value(r)
}

pub fn run(command: &Command, g: &Global) -> Result<Outcome> {
    match command {
        Command::VerifyAll => verify_all(g),
        Command::Constants => constants(g),
        Command::Integrate { poly, from, to } => integrate(&poly.0, *from, *to, g),
        Command::Sublevel {
            source,
            from,
            to,
            alpha,
            lambda,
        } => sublevel(source, *from, *to, *alpha, lambda, g),
        Command::Divdiff {
            nodes,
            poly,
            probe_trials,
            perturbation,
        } => divdiff(
            nodes.as_ref().map(|c| c.0.as_slice()),
            poly.as_ref().map(|c| c.0.as_slice()),
            *probe_trials,
            *perturbation,
            g,
        ),
        Command::SearchCubic { window, samples } => search_cubic(*window, *samples, g),
        Command::ConjectureN2 => conjecture(g),
        Command::Mvt {
            weight,
            phase,
            from,
            to,
            form,
        } => mvt(&weight.0, &phase.0, *from, *to, *form, g),
        Command::RlAudit { poly } => rl_audit(&poly.0, g),
    }
}

fn verify_all(g: &Global) -> Result<Outcome> {
    if let Some(id) = &g.inject_fault {
        if !CHECK_IDS.contains(&id.as_str()) {
            return Err(usage(format!("unknown check `{id}`; known: {}", CHECK_IDS.join(", "))));
        }
    }
    let opts = HarnessOptions {
        tol: g.tol,
        grid: g.grid,
        seed: g.seed,
        fault: g.inject_fault.clone(),
    };
    let report = run_all(&opts)?;
    let failures = report
        .failures()
        .map(|c| {
            format!(
                "{} [{}]: value {} vs expected {} (tolerance {})",
                c.title, c.id, c.value, c.expected, c.tolerance
            )
        })
        .collect();
    let discrepancies = report.discrepancies.iter().map(to_value).collect::<Result<_>>()?;
    Ok(Outcome {
        results: json!({ "all_pass": report.all_pass, "checks": to_value(&report.checks)? }),
        discrepancies,
        failures,
        table: None,
    })
}

pub const CONSTANTS_HEADER: [&str; 7] = [
    "n",
    "sublevel_C",
    "vdc_C",
    "corollary_C",
    "arhipov_C",
    "target_4n_over_e",
    "target_4_over_e",
];

fn constants(g: &Global) -> Result<Outcome> {
    let n_max = g.n_max.or(g.n).unwrap_or(10);
    if n_max < 2 {
        return Err(usage("--n-max must be at least 2"));
    }
    let table = constants_table(n_max)?;
    let rows = table
        .rows
        .iter()
        .map(|r| {
            vec![
                json!(r.n),
                json!(r.sublevel_c),
                json!(r.vdc_c),
                json!(r.corollary_c),
                json!(r.arhipov_c),
                json!(r.target_4n_over_e),
                json!(r.target_4_over_e),
            ]
        })
        .collect();
    Ok(Outcome {
        table: Some((CONSTANTS_HEADER.iter().map(|s| s.to_string()).collect(), rows)),
        ..Outcome::plain(to_value(&table)?)
    })
}

fn integrate(coeffs: &[f64], a: f64, b: f64, g: &Global) -> Result<Outcome> {
    check_interval(a, b)?;
    let p = Polynomial::new(coeffs.to_vec());
    let r = oscillatory_integral(&PhaseFunction::from_polynomial(&p), a, b, g.tol)?;
    Ok(Outcome::plain(json!({
        "phase": p.coeffs(),
        "interval": [a, b],
        "real": r.value.re,
        "imag": r.value.im,
        "modulus": r.modulus,
        "argument": r.argument,
        "error_estimate": r.error_estimate,
        "panels": r.panels,
    })))
}

/// Minimum of `|q|` on `[a, b]`: grid scan, then golden refinement in the best cell.
fn min_abs_on(q: &Polynomial, a: f64, b: f64, grid: usize) -> f64 {
    let step = (b - a) / (grid - 1) as f64;
    let (i, best) = (0..grid)
        .map(|i| (i, q.eval(a + step * i as f64).abs()))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let lo = a + step * i.saturating_sub(1) as f64;
    let hi = (a + step * (i + 1) as f64).min(b);
    golden_min(|x| q.eval(x).abs(), lo, hi, 1e-14).value.min(best)
}

fn sublevel(
    source: &PolySource,
    from: Option<f64>,
    to: Option<f64>,
    alpha: f64,
    lambda: &str,
    g: &Global,
) -> Result<Outcome> {
    let (p, default_interval) = match (&source.poly, source.cheb) {
        (Some(c), None) => (Polynomial::new(c.0.clone()), None),
        (None, Some(n)) => (chebyshev(n), Some((-1.0, 1.0))),
        _ => return Err(usage("give exactly one of --poly or --cheb")),
    };
    let (a, b) = match (from, to, default_interval) {
        (Some(a), Some(b), _) => (a, b),
        (None, None, Some(d)) => d,
        _ => return Err(usage("--from and --to are required with --poly")),
    };
    check_interval(a, b)?;
    if !(alpha > 0.0) {
        return Err(usage("--alpha must be positive"));
    }
    let n = g.n.unwrap_or(p.degree());
    if n == 0 {
        return Err(usage("derivative order must be at least 1 (constant polynomial?)"));
    }
    let dn = p.derivative(n);
    let lambda_value = if lambda == "auto" {
        min_abs_on(&dn, a, b, g.grid)
    } else {
        lambda
            .parse::<f64>()
            .map_err(|_| usage(format!("--lambda must be a number or `auto`, got `{lambda}`")))?
    };
    if !(lambda_value > 0.0) {
        bail!("|p^({n})| reaches {lambda_value} on [{a}, {b}]; no positive lambda exists");
    }
    let (report, m) = verify_sublevel(
        |x| p.eval(x),
        Some(&|x| dn.eval(x)),
        n,
        a,
        b,
        alpha,
        lambda_value,
        g.grid,
    )?;
    let mut out = Outcome::plain(json!({
        "polynomial": p.coeffs(),
        "order": n,
        "lambda_mode": if lambda == "auto" { "auto" } else { "given" },
        "measure": m.measure,
        "bound": report.bound,
        "margin": report.margin,
        "pass": report.pass,
        "measurement": to_value(&m)?,
        "report": report_value(&report)?,
    }));
    if !report.pass {
        out.failures
            .push(format!("sublevel estimate violated: {} > {}", m.measure, report.bound));
    }
    Ok(out)
}

fn divdiff(
    nodes: Option<&[f64]>,
    poly: Option<&[f64]>,
    trials: usize,
    perturbation: f64,
    g: &Global,
) -> Result<Outcome> {
    let set = match nodes {
        Some(xs) => NodeSet::from_points(xs.to_vec()).map_err(|e| usage(e.to_string()))?,
        None => chebyshev_extrema(g.n.unwrap_or(4))?,
    };
    let coeffs = mean_value_coefficients(&set)?;
    let mut results = json!({
        "nodes": set.nodes(),
        "order": set.order(),
        "mean_value_coefficients": coeffs.c,
    });
    let inside = set.nodes().iter().all(|x| x.abs() <= 1.0);
    if inside {
        let sum = minimal_node_sum(&set)?;
        results["node_weight_sum"] = json!(sum);
        results["minimal_value"] = json!(2f64.powi(set.order() as i32 - 1));
    }
    if let Some(c) = poly {
        let p = Polynomial::new(c.to_vec());
        let dd = divided_difference(|x| p.eval(x), &set)?;
        results["divided_difference"] = json!(dd);
        results["polynomial"] = json!(p.coeffs());
    }
    if trials > 0 {
        let probe = uniqueness_probe(set.order(), trials, perturbation, g.seed)?;
        results["uniqueness_probe"] = report_value(&probe)?;
    }
    Ok(Outcome::plain(results))
}

fn search_tol(g: &Global) -> f64 {
    g.tol.clamp(1e-8, 1e-4)
}

fn search_cubic(window: f64, samples: usize, g: &Global) -> Result<Outcome> {
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let r = cubic_search(search_tol(g).max(1e-7), window, samples)?;
    let extremum = r.diagnostics.extras["phase_extremum"];
    let mut out = Outcome::plain(json!({
        "a1": r.params[0],
        "a3": r.params[1],
        "ratio": r.params[2],
        "objective": r.objective,
        "search": to_value(&r)?,
    }));
    out.discrepancies.push(json!({
        "id": "cubic-extremum-values",
        "title": "local extremum values of the extremal cubic",
        "printed": 0.5935,
        "computed": extremum,
    }));
    Ok(out)
}

fn conjecture(g: &Global) -> Result<Outcome> {
    let r = conjectured_n2_constant(search_tol(g))?;
    Ok(Outcome::plain(to_value(&r)?))
}

fn mvt(weight: &[f64], phase: &[f64], a: f64, b: f64, form: MvtFormArg, g: &Global) -> Result<Outcome> {
    check_interval(a, b)?;
    let f = Polynomial::new(weight.to_vec());
    let ph = Polynomial::new(phase.to_vec());
    let form = match form {
        MvtFormArg::TwoSided => MvtForm::TwoSided,
        MvtFormArg::LeftEndpoint => MvtForm::LeftEndpoint,
    };
    let p = complex_mvt_point(
        |x| f.eval(x),
        |x| Complex64::from_polar(1.0, ph.eval(x)),
        a,
        b,
        g.tol.max(1e-12),
        form,
    )?;
    Ok(Outcome::plain(json!({
        "c": p.c,
        "residual": p.residual,
        "modulus": p.integral.modulus,
        "argument": p.integral.argument,
        "form": to_value(&form)?,
    })))
}

fn rl_audit(coeffs: &[f64], g: &Global) -> Result<Outcome> {
    let p = Polynomial::new(coeffs.to_vec());
    let n = g.n.unwrap_or(1);
    let n = u32::try_from(n).map_err(|_| anyhow!("frequency too large"))?;
    let r = verify_riemann_lebesgue(|x| p.eval(x), n, g.tol.min(1e-10))?;
    let mut out = Outcome::plain(json!({
        "polynomial": p.coeffs(),
        "frequency": n,
        "report": report_value(&r)?,
    }));
    let printed = r.details["printed_bound"];
    let modulus = r.details["modulus"];
    out.discrepancies.push(json!({
        "id": "fourier-coefficient-sign",
        "title": "Fourier coefficient bound with (1 - sin θ)",
        "printed": printed,
        "computed": modulus,
        "violated": printed < modulus - 1e-9,
        "corrected_bound": r.bound,
        "corrected_margin": r.margin,
    }));
    if !r.pass {
        out.failures
            .push(format!("(1 + sin θ) bound violated: {} > {}", modulus, r.bound));
    }
    Ok(out)
}
