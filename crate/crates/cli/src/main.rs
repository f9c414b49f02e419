//! `besovgrid`: sparse wavelet grids for exponentially weighted smoothness
//! classes.
//!
//! The tool drives the `besovgrid-core` library through three subcommands:
//!
//! * `grid` — enumerate the sparse coefficient grid selected by a damping
//!   threshold and write the retained basis-function centers (CSV) together
//!   with the full index set and its parameters (JSON).
//! * `approx` — expand a test function over a compactly supported
//!   orthonormal wavelet basis, truncate the expansion to the sparse grid,
//!   and report the a-priori error bound next to the measured weighted-`Lᵖ`
//!   error of the truncated reconstruction.
//! * `norm` — evaluate the weighted Besov sequence quasinorm of a
//!   coefficient file under the configured exponents and weight.
//!
//! Exit codes: `0` on success, `2` for configuration errors (unreadable or
//! invalid inputs, parameters outside their domains), `3` for numerical
//! failures inside the computation itself.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

mod config;
mod formats;
mod functions;
mod runner;

use config::RunConfig;

/// Errors surfaced to the shell, split by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad inputs: unreadable files, malformed JSON, parameters outside
    /// their documented domains. Exit code 2.
    Config(String),
    /// The computation itself broke down (iteration divergence, precision
    /// loss). Exit code 3.
    Numeric(String),
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        CliError::Numeric(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(message) | CliError::Numeric(message) => write!(f, "{message}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<besovgrid_core::Error> for CliError {
    fn from(err: besovgrid_core::Error) -> Self {
        use besovgrid_core::Error;
        let message = err.to_string();
        match err {
            Error::DimensionMismatch { .. }
            | Error::InvalidParameter(_)
            | Error::UnsupportedOrder(_)
            | Error::LevelCapTooSmall { .. } => CliError::Config(message),
            Error::CascadeDiverged { .. }
            | Error::NumericalFailure(_)
            | Error::Undersampled { .. } => CliError::Numeric(message),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "besovgrid",
    version,
    about = "Sparse wavelet grids for exponentially weighted smoothness classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the sparse grid and write centers.csv + grid.json.
    Grid {
        /// Run configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Approximate a test function on the sparse grid and measure the error.
    Approx {
        /// Run configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory for report.json + coefficients.json; the report
        /// prints to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace the configured test function (exp_l1, gaussian,
        /// basis_element).
        #[arg(long)]
        function: Option<String>,
        /// Test-function parameter override as key=value; repeatable
        /// (a=2.0, j=1,0, m=3,-2).
        #[arg(long = "param")]
        params: Vec<String>,
    },
    /// Print the sequence quasinorm of a coefficient file.
    Norm {
        /// Coefficient file: JSON array of {"j": [...], "m": [...],
        /// "lambda": ...} entries.
        coeffs: PathBuf,
        /// Run configuration (JSON).
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("besovgrid: {err}");
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Grid { config, out } => {
            let config = RunConfig::load(&config)?;
            let (centers_csv, grid_json) = runner::run_grid(&config)?;
            ensure_dir(&out)?;
            write_file(&out.join("centers.csv"), &centers_csv)?;
            write_file(&out.join("grid.json"), &grid_json)?;
            println!("grid written to {}", out.display());
            Ok(())
        }
        Command::Approx { config, out, function, params } => {
            let config = RunConfig::load(&config)?;
            let (report, kept) = runner::run_approx(&config, function.as_deref(), &params)?;
            let report_json =
                serde_json::to_string_pretty(&report).expect("plain data serializes");
            match out {
                Some(dir) => {
                    ensure_dir(&dir)?;
                    write_file(&dir.join("report.json"), &report_json)?;
                    write_file(&dir.join("coefficients.json"), &runner::kept_to_json(&kept))?;
                    println!("report written to {}", dir.display());
                }
                None => println!("{report_json}"),
            }
            Ok(())
        }
        Command::Norm { coeffs, config } => {
            let config = RunConfig::load(&config)?;
            let value = runner::run_norm(&coeffs, &config)?;
            println!("{value:.11e}");
            Ok(())
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::config(format!("cannot create {}: {e}", dir.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
}
