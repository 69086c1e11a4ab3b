//! Command-line driver: reads a JSON experiment config, runs one transform
//! or check, and writes RGRD grids, CSV reports and a run manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use error::{CliError, CliResult, FailureKind};
use output::{sha256_hex, OutputEntry, Outputs};

#[derive(Debug, Parser)]
#[command(name = "igt", version, about = "Restricted Radon, Funk and hyperbolic transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for grids, reports and the manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: hardware count).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = LogLevel::Warn)]
    log_level: LogLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Restricted k-plane transform of a field on R^n.
    ForwardEuclidean,
    /// Fourier-slice or dual-formula inversion of a stored sinogram.
    InvertEuclidean,
    /// Restricted Funk transform sampled over (v, w) grids.
    ForwardFunk,
    /// Pointwise reconstruction from a stored Funk sinogram.
    InvertFunk,
    /// Restricted totally geodesic transform on the hyperboloid.
    ForwardHyperbolic,
    /// Range criteria for a Euclidean sinogram.
    CheckRange,
    /// Integral identities against their two sides.
    CheckIdentity,
    /// Truncated integrals of the sharpness counterexamples.
    ScanDivergence,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LogLevel {
    Error,
    Warn,
    Info,
    Debug,
}

impl From<LogLevel> for log::LevelFilter {
    fn from(l: LogLevel) -> Self {
        match l {
            LogLevel::Error => log::LevelFilter::Error,
            LogLevel::Warn => log::LevelFilter::Warn,
            LogLevel::Info => log::LevelFilter::Info,
            LogLevel::Debug => log::LevelFilter::Debug,
        }
    }
}

/// What a command hands back to the driver.
pub(crate) struct Outcome {
    /// Set when a numerical check ran to completion but failed.
    pub failed_check: Option<String>,
}

pub(crate) struct Ctx {
    pub config: PathBuf,
    pub out: Outputs,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: Command,
    config: String,
    inputs: Vec<OutputEntry>,
    parameters: serde_json::Value,
    threads: usize,
    wall_time_seconds: f64,
    outputs: &'a [OutputEntry],
}

/// Runs the driver on `argv` (program name first) and returns the exit code:
/// 0 success, 2 precondition, 3 numerical-check failure, 4 I/O.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::precondition(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return FailureKind::Precondition.exit_code();
        }
    };
    let _ = env_logger::Builder::new().filter_level(cli.log_level.into()).format_timestamp(None).try_init();
    match execute(&cli) {
        Ok(None) => 0,
        Ok(Some(msg)) => {
            let err = CliError::numerical(msg);
            eprintln!("{}", err.to_json());
            err.kind.exit_code()
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            err.kind.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> CliResult<Option<String>> {
    let config = cli
        .config
        .clone()
        .ok_or_else(|| CliError::precondition("--config <path> is required").with_key("--config"))?;
    let threads = match cli.threads {
        Some(0) => return Err(CliError::precondition("--threads must be >= 1").with_key("--threads")),
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::precondition(format!("cannot start worker pool: {e}")))?;
    let started = Instant::now();
    let mut ctx = Ctx { config: config.clone(), out: Outputs::new(cli.out.clone())? };
    log::info!("{:?} with {} worker(s)", cli.command, pool.current_num_threads());
    let (outcome, raw) = pool.install(|| dispatch(cli.command, &mut ctx))?;

    if ctx.out.dir().is_some() {
        let base = config.parent().map(Path::to_path_buf).unwrap_or_default();
        let mut inputs = vec![hash_file(&config)?];
        for p in referenced_paths(&raw) {
            let full = config::resolve(&base, Path::new(&p));
            if full.is_file() {
                inputs.push(hash_file(&full)?);
            }
        }
        let entries = ctx.out.entries.clone();
        let manifest = Manifest {
            tool: "igt",
            version: env!("CARGO_PKG_VERSION"),
            command: cli.command,
            config: config.display().to_string(),
            inputs,
            parameters: raw,
            threads: pool.current_num_threads(),
            wall_time_seconds: started.elapsed().as_secs_f64(),
            outputs: &entries,
        };
        ctx.out.json("manifest.json", &manifest)?;
    }
    Ok(outcome.failed_check)
}

fn dispatch(command: Command, ctx: &mut Ctx) -> CliResult<(Outcome, serde_json::Value)> {
    match command {
        Command::ForwardEuclidean => commands::euclid::forward(ctx),
        Command::InvertEuclidean => commands::euclid::invert(ctx),
        Command::ForwardFunk => commands::funk::forward(ctx),
        Command::InvertFunk => commands::funk::invert(ctx),
        Command::ForwardHyperbolic => commands::hyperbolic::forward(ctx),
        Command::CheckRange => commands::check::range(ctx),
        Command::CheckIdentity => commands::check::identity(ctx),
        Command::ScanDivergence => commands::scan::divergence(ctx),
    }
}

fn hash_file(path: &Path) -> CliResult<OutputEntry> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    Ok(OutputEntry { path: path.display().to_string(), bytes: bytes.len(), sha256: sha256_hex(&bytes) })
}

/// File references inside a config: string values under `path`,
/// `sinogram` or `sidecar` keys.
fn referenced_paths(v: &serde_json::Value) -> Vec<String> {
    let mut out = Vec::new();
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                match val {
                    serde_json::Value::String(s) if matches!(k.as_str(), "path" | "sinogram" | "sidecar") => out.push(s.clone()),
                    _ => out.extend(referenced_paths(val)),
                }
            }
        }
        serde_json::Value::Array(items) => items.iter().for_each(|x| out.extend(referenced_paths(x))),
        _ => {}
    }
    out
}
