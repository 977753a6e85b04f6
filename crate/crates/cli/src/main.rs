use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qpdiff_cli::commands::{classify, emit, encode_field, field, verify};
use qpdiff_cli::output::write_json;
use qpdiff_cli::plot::{plot, Quantity};
use qpdiff_cli::{CliError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "qpdiff", version, about = "Far-field diffraction by a soft quarter-plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the case, the real traces and the special points.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every wave component on the configured grid.
    Field {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// Run verification suites and print their reports.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, hide = true)]
        perturb: f64,
    },
    /// Draw field records as SVG.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `total`, `scattered`, or a component label such as `SD1`.
        #[arg(long, default_value = "total")]
        quantity: String,
        /// Polar angle of the directivity cut for spherical sweeps.
        #[arg(long)]
        theta: Option<f64>,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn json_line<T: serde::Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_json(&mut buf, value)?;
    buf.push(b'\n');
    Ok(buf)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let report = classify(&cfg)?;
            emit(&json_line(&report)?, out.as_deref())
        }
        Command::Field { config, out, format, jobs } => {
            let cfg = RunConfig::load(&config)?;
            for w in cfg.warnings() {
                eprintln!("warning: {w}");
            }
            let records = field(&cfg, jobs)?;
            let bytes = encode_field(&records, format.unwrap_or(cfg.output.format))?;
            emit(&bytes, out.as_deref().or(cfg.output.path.as_deref()))
        }
        Command::Verify { suite, out, perturb } => {
            let reports = verify(&suite, perturb)?;
            emit(&json_line(&reports)?, out.as_deref())?;
            let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.suite.as_str()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failed.join(", ")))
            }
        }
        Command::Plot { input, out, quantity, theta } => plot(&input, &out, &Quantity::parse(&quantity), theta),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qpdiff: {e}");
            e.exit_code()
        }
    }
}
