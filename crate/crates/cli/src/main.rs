use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dpcomb::{single_matrix, Contrast, TransferMatrix};
use dpcomb_cli::error::{CliError, CliResult};
use dpcomb_cli::sweep::DEFAULT_POINTS;
use dpcomb_cli::{cmd_envelope, cmd_resonances, cmd_spectrum, verify_with, EnvelopeConfig, Level, Mode, SweepConfig};

#[derive(Parser)]
#[command(name = "dpcomb", version, about = "Transmission spectra of δ'_θ-combs")]
struct Cli {
    /// Worker threads for grid evaluation (default: all cores)
    #[arg(long, env = "DPCOMB_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Grid {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k_min: f64,
    #[arg(long, default_value_t = PI, allow_negative_numbers = true)]
    k_max: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record a Unix timestamp in the header
    #[arg(long)]
    stamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// T(k) over a grid
    Spectrum {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Ideal)]
        mode: Mode,
        /// Dipole half-width (regularized and oracle modes)
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        /// Sampled half-bound state file replacing the quartic example
        #[arg(long)]
        potential: Option<PathBuf>,
        /// Add 50 points around each resonance
        #[arg(long)]
        refine: bool,
        /// Add a T_alt column from an independent route
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        grid: Grid,
    },
    /// Table of the n-1 unit-transmission resonances
    Resonances {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
    },
    /// The envelope ζ_θ(k), optionally with min over n <= --min-n
    Envelope {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long)]
        min_n: Option<usize>,
        #[command(flatten)]
        grid: Grid,
    },
    /// Cross-route equivalence and invariant checks
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
        /// Flip the sign of the single-site off-diagonal (mutation test)
        #[arg(long, hide = true)]
        mutate: bool,
    },
}

fn print_stdout(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Io {
            path: "<stdout>".into(),
            source: e,
        })
}

fn run(cli: Cli) -> CliResult<()> {
    let threads = cli.threads.filter(|&t| t > 0);
    match cli.command {
        Command::Spectrum {
            theta,
            n,
            mode,
            epsilon,
            spacing,
            potential,
            refine,
            check,
            grid,
        } => {
            let config = SweepConfig {
                theta,
                n,
                k_min: grid.k_min,
                k_max: grid.k_max,
                k_points: grid.points,
                mode,
                epsilon,
                h: spacing,
                output_path: grid.out.clone(),
                potential,
                refine,
                check,
                threads,
                stamp: grid.stamp,
            };
            let table = cmd_spectrum(&config)?;
            if grid.out.is_none() {
                print_stdout(&table.to_csv())?;
            }
        }
        Command::Resonances { theta, n, spacing } => print_stdout(&cmd_resonances(theta, n, spacing)?)?,
        Command::Envelope { theta, min_n, grid } => {
            let config = EnvelopeConfig {
                theta,
                k_min: grid.k_min,
                k_max: grid.k_max,
                k_points: grid.points,
                min_n,
                output_path: grid.out.clone(),
                threads,
                stamp: grid.stamp,
            };
            let table = cmd_envelope(&config)?;
            if grid.out.is_none() {
                print_stdout(&table.to_csv())?;
            }
        }
        Command::Verify { level, mutate } => {
            let report = if mutate {
                verify_with(level, |c: Contrast, z: f64| {
                    let m = single_matrix(c, z);
                    TransferMatrix::new(m.z1, -m.z2)
                })
            } else {
                verify_with(level, single_matrix)
            };
            print_stdout(&report.render())?;
            report.into_result()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dpcomb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
