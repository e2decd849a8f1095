//! `projangles` batch front end.
//!
//! Each subcommand reads its inputs, runs one analysis and writes a JSON
//! report (schema 1) to `--out` or stdout. Exit status: 0 on success, 1 on
//! I/O failure, 2 on invalid input or domain errors (with an error JSON), 3
//! when an iteration fails to converge (with its residual history).

mod commands;
mod plot;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use projangles::{Error, Tolerances};

pub const SEED_ENV: &str = "PROJANGLES_SEED";

#[derive(Debug, Parser)]
#[command(name = "projangles", version, about = "Angles between projections, averaged projections and link spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized internals; overridden by PROJANGLES_SEED.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cauchy tolerance of the averaged iteration.
    #[arg(long)]
    pub iteration_tol: Option<f64>,
    /// Iteration cap of the averaged iteration.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Truncation tolerance of the decomposition series.
    #[arg(long)]
    pub tree_tol: Option<f64>,
    /// Pass threshold of the consistency check.
    #[arg(long)]
    pub consistency_tol: Option<f64>,
}

impl Common {
    pub fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(v) = self.iteration_tol {
            t.iteration = v;
        }
        if let Some(v) = self.max_iter {
            t.max_iterations = v;
        }
        if let Some(v) = self.tree_tol {
            t.tree_series = v;
        }
        if let Some(v) = self.consistency_tol {
            t.consistency = v;
        }
        t
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// κ and (1 − κ)·V_min^{1/r} of a bipartite link graph.
    Spectra(commands::SpectraArgs),
    /// Sweep over the supported field orders for generalized m-gons.
    MgonSweep(commands::SweepArgs),
    /// Angles and consistency of a projection family.
    Angle(commands::AngleArgs),
    /// Averaged-projections iteration with its convergence certificate.
    Average(commands::AverageArgs),
    /// Decomposition of Im P_η into the summands X^τ.
    Decompose(commands::DecomposeArgs),
    /// Simplex family of averaging operators from a finite group.
    GroupModel(commands::GroupModelArgs),
    /// Numerical checks linking coset graphs to averaging operators.
    Bridge(commands::BridgeArgs),
}

#[derive(Debug)]
pub enum CliError {
    Core { file: Option<PathBuf>, source: Error },
    Io { path: PathBuf, source: std::io::Error },
    Invalid(String),
}

impl CliError {
    pub fn core(source: Error) -> Self {
        Self::Core { file: None, source }
    }

    pub fn in_file(path: &Path) -> impl FnOnce(Error) -> Self + '_ {
        move |source| Self::Core { file: Some(path.to_path_buf()), source }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Self::Core { source: Error::NonConvergence { .. }, .. } => 3,
            Self::Core { .. } | Self::Invalid(_) => 2,
            Self::Io { .. } => 1,
        }
    }

    fn to_json(&self) -> Value {
        let body = match self {
            Self::Core { file, source } => {
                let mut e = json!({ "kind": source.kind(), "message": source.to_string() });
                if let Some(f) = file {
                    e["file"] = json!(f.display().to_string());
                }
                match source {
                    Error::Parse { line, expected } => {
                        e["line"] = json!(line);
                        e["expected"] = json!(expected);
                    }
                    Error::NonConvergence { iterations, residuals } => {
                        e["iterations"] = json!(iterations);
                        e["residuals"] = json!(residuals);
                    }
                    _ => {}
                }
                e
            }
            Self::Io { path, source } => json!({ "kind": "io", "file": path.display().to_string(), "message": source.to_string() }),
            Self::Invalid(msg) => json!({ "kind": "invalid-argument", "message": msg }),
        };
        report::round_numbers(json!({ "schema": report::SCHEMA, "version": env!("CARGO_PKG_VERSION"), "error": body }))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Core { file: Some(p), source } => write!(f, "{}: {source}", p.display()),
            Self::Core { file: None, source } => write!(f, "{source}"),
            Self::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Self::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::core(e)
    }
}

/// The seed actually used: `PROJANGLES_SEED` wins over `--seed`.
pub fn effective_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Invalid(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (name, common, outcome) = match &cli.command {
        Command::Spectra(a) => ("spectra", &a.common, commands::spectra(a)),
        Command::MgonSweep(a) => ("mgon-sweep", &a.common, commands::mgon_sweep(a)),
        Command::Angle(a) => ("angle", &a.common, commands::angle(a)),
        Command::Average(a) => ("average", &a.common, commands::average(a)),
        Command::Decompose(a) => ("decompose", &a.common, commands::decompose(a)),
        Command::GroupModel(a) => ("group-model", &a.common, commands::group_model(a)),
        Command::Bridge(a) => ("bridge", &a.common, commands::bridge(a)),
    };
    let commands::Outcome { config, result } = outcome.inspect_err(|e| {
        // error reports go where the report would have gone
        let bytes = report::to_bytes(&e.to_json());
        let _ = report::emit(common.out.as_deref(), &bytes);
    })?;
    let mut config = config;
    config["subcommand"] = json!(name);
    let doc = report::envelope(config, &common.tolerances(), result);
    let bytes = report::to_bytes(&doc);
    report::emit(common.out.as_deref(), &bytes)
        .map_err(|source| CliError::Io { path: common.out.clone().unwrap_or_else(|| "<stdout>".into()), source })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
