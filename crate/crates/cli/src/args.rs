use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "corput",
    version,
    about = "Sharp van der Corput and sublevel-set constants: reproduction and audit"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Absolute quadrature / search tolerance.
    #[arg(long, global = true, default_value = "1e-10", value_parser = positive_float)]
    pub tol: f64,
    /// Grid size for sublevel measurement and spot checks.
    #[arg(long, global = true, default_value = "1e5", value_parser = grid_size)]
    pub grid: usize,
    /// Order, degree or frequency, depending on the subcommand.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Largest n in the constants table.
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Perturb the named verify-all check so that it fails.
    #[arg(long = "inject-fault", global = true, hide = true)]
    pub inject_fault: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Run every reproduction check and discrepancy audit.
    VerifyAll,
    /// Table of the closed-form constants for 2 <= n <= n-max.
    Constants,
    /// |∫ e^{i p(x)} dx| for a polynomial phase.
    #[command(allow_negative_numbers = true)]
    Integrate {
        /// Phase coefficients, ascending: c0,c1,...
        #[arg(long, value_parser = coefficient_list, allow_hyphen_values = true)]
        poly: Coefficients,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
    },
    /// Measure {|p| <= alpha} and compare with the sublevel estimate.
    #[command(allow_negative_numbers = true)]
    Sublevel {
        #[command(flatten)]
        source: PolySource,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        alpha: f64,
        /// Lower bound for |p^(n)|, or `auto` to take its minimum on the interval.
        #[arg(long, default_value = "auto")]
        lambda: String,
    },
    /// Divided difference and mean value weights on a node set.
    #[command(allow_negative_numbers = true)]
    Divdiff {
        /// Nodes; defaults to the Chebyshev extrema of order --n.
        #[arg(long, value_parser = coefficient_list, allow_hyphen_values = true)]
        nodes: Option<Coefficients>,
        /// Polynomial whose divided difference is reported.
        #[arg(long, value_parser = coefficient_list, allow_hyphen_values = true)]
        poly: Option<Coefficients>,
        /// Trials for the minimal-node uniqueness probe (0 skips it).
        #[arg(long, default_value_t = 0)]
        probe_trials: usize,
        #[arg(long, default_value_t = 0.05)]
        perturbation: f64,
    },
    /// Extremal search over a1 x + x³.
    #[command(allow_negative_numbers = true)]
    SearchCubic {
        #[arg(long, default_value_t = 6.0)]
        window: f64,
        #[arg(long, default_value_t = 1201)]
        samples: usize,
    },
    /// Fresnel-based candidate for the sharp second-derivative constant.
    ConjectureN2,
    /// Complex second mean value point for f = weight, g = e^{i phase}.
    #[command(allow_negative_numbers = true)]
    Mvt {
        #[arg(long, value_parser = coefficient_list, allow_hyphen_values = true)]
        weight: Coefficients,
        #[arg(long, value_parser = coefficient_list, allow_hyphen_values = true)]
        phase: Coefficients,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, value_enum, default_value_t = MvtFormArg::TwoSided)]
        form: MvtFormArg,
    },
    /// Fourier coefficient bound for an increasing polynomial on [0, 1], both sign variants.
    #[command(allow_negative_numbers = true)]
    RlAudit {
        #[arg(long, value_parser = coefficient_list, allow_hyphen_values = true, default_value = "0,1")]
        poly: Coefficients,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
#[group(required = true, multiple = false)]
pub struct PolySource {
    #[arg(long, value_parser = coefficient_list, allow_hyphen_values = true)]
    pub poly: Option<Coefficients>,
    /// Use the Chebyshev polynomial T_N on [-1, 1].
    #[arg(long)]
    pub cheb: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MvtFormArg {
    TwoSided,
    LeftEndpoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Coefficients(pub Vec<f64>);

fn coefficient_list(s: &str) -> Result<Coefficients, String> {
    let values = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("empty list".into());
    }
    Ok(Coefficients(values))
}

fn positive_float(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got `{s}`")),
    }
}

fn grid_size(s: &str) -> Result<usize, String> {
    let v: f64 = s.parse().map_err(|_| format!("expected an integer, got `{s}`"))?;
    if v.fract() != 0.0 || !(2.0..=1e9).contains(&v) {
        return Err(format!("grid must be an integer in [2, 1e9], got `{s}`"));
    }
    Ok(v as usize)
}
