// `!(x > 0.0)` is deliberate: NaN must be rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod render;

use std::fmt;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Format};

/// Bad input from the command line; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn is_usage(e: &anyhow::Error) -> bool {
    e.downcast_ref::<UsageError>().is_some()
        || matches!(
            e.downcast_ref::<corput::Error>(),
            Some(
                corput::Error::InvalidInterval { .. }
                    | corput::Error::InvalidArgument(_)
                    | corput::Error::CoincidentNodes(_)
                    | corput::Error::NodeOutsideInterval { .. }
            )
        )
}

fn render(cli: &Cli, outcome: &commands::Outcome) -> anyhow::Result<String> {
    let doc = json!({
        "config": {
            "subcommand": serde_json::to_value(&cli.command)?,
            "tol": cli.global.tol,
            "grid": cli.global.grid,
            "n": cli.global.n,
            "n_max": cli.global.n_max,
            "seed": cli.global.seed,
            "format": serde_json::to_value(cli.global.format)?,
            "out": cli.global.out.as_ref().map(|p| p.display().to_string()),
        },
        "results": outcome.results,
        "discrepancies": Value::Array(outcome.discrepancies.clone()),
    });
    match cli.global.format {
        Format::Json => render::json(&doc),
        Format::Human => Ok(render::human(&doc, &outcome.failures)),
        Format::Csv => match &outcome.table {
            Some((header, rows)) => render::csv(header, rows),
            None => {
                let rows: Vec<Vec<Value>> = render::flatten(&json!({
                    "results": outcome.results,
                    "discrepancies": Value::Array(outcome.discrepancies.clone()),
                }))
                .into_iter()
                .map(|(k, v)| vec![Value::String(k), Value::String(v)])
                .collect();
                render::csv(&["key".to_string(), "value".to_string()], &rows)
            }
        },
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let outcome = commands::run(&cli.command, &cli.global)?;
    let text = render(cli, &outcome)?;
    match &cli.global.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    for f in &outcome.failures {
        eprintln!("verification failed: {f}");
    }
    Ok(outcome.failures.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_usage(&e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
