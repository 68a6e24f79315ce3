//! `means-lab`: evaluate bivariate means and check the sharp weighted-mean
//! bounds for the Neuman-Sandor mean from the command line.
//!
//! Exit codes: 0 when every claim holds (or a sharpness witness is found),
//! 1 when a verification fails, 2 on usage or domain errors.

mod commands;
mod report;

use std::io::{self, IsTerminal};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use means_lab::certify::{Side, DEFAULT_GRID};
use means_lab::Error;

use report::Format;

const THREADS_VAR: &str = "MEANS_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "means-lab",
    version,
    about = "Bivariate means and sharp bounds for the Neuman-Sandor mean"
)]
struct Cli {
    /// Output format; defaults to human on a terminal and json otherwise.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Lower,
    Upper,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Lower => Side::Lower,
            SideArg::Upper => Side::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
enum Pairing {
    /// (t cosh t - sinh t) against cosh(2t)/2 + cosh t - 3/2.
    Hq,
    /// t (cosh 2t + 1) - 2 sinh t against 2t (cosh 2t - 1).
    Hc,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate means at a pair.
    Eval {
        /// Comma-separated symbols: H G L P A M T Q C or Lp:<p>.
        #[arg(long, value_delimiter = ',', required = true)]
        means: Vec<String>,
        /// The pair as `a,b` (decimal or scientific notation).
        #[arg(long, allow_hyphen_values = true)]
        pair: String,
    },
    /// Check a double inequality (1.1, 1.2, 1.3), the mean chain, or the companion corpus.
    Verify {
        /// One of 1.1, 1.2, 1.3, chain, corpus.
        target: String,
        /// Grid points for 1.1-1.3.
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Random samples for chain and corpus.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Generator seed for chain and corpus.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Weight of the lower bound (defaults to the sharp weight).
        #[arg(long, allow_hyphen_values = true)]
        weight_lower: Option<f64>,
        /// Weight of the upper bound (defaults to the sharp weight).
        #[arg(long, allow_hyphen_values = true)]
        weight_upper: Option<f64>,
    },
    /// Perturb a sharp weight toward failure and search for a violating pair.
    Sharpness {
        /// One of 1.1, 1.2, 1.3.
        bound: String,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
        epsilon: f64,
    },
    /// Print the sharp constants with a numerical cross-check.
    Constants,
    /// Check monotonicity of a coefficient-ratio sequence with exact rationals.
    Series {
        #[arg(value_enum, ignore_case = true)]
        pairing: Pairing,
        #[arg(long, default_value_t = 50)]
        terms: u32,
    },
}

/// Failure of an invocation, mapped to an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "{THREADS_VAR} must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot build thread pool: {e}")))
}

fn run(cli: Cli) -> Result<bool, Failure> {
    configure_threads()?;
    let report = match cli.command {
        Command::Eval { means, pair } => commands::eval(&means, &pair)?,
        Command::Verify {
            target,
            grid,
            samples,
            seed,
            weight_lower,
            weight_upper,
        } => commands::verify(&target, grid, samples, seed, weight_lower, weight_upper)?,
        Command::Sharpness {
            bound,
            side,
            epsilon,
        } => commands::sharpness(&bound, side.into(), epsilon)?,
        Command::Constants => commands::constants()?,
        Command::Series { pairing, terms } => commands::series(pairing, terms)?,
    };
    let format = cli.format.unwrap_or(if io::stdout().is_terminal() {
        Format::Human
    } else {
        Format::Json
    });
    let stdout = io::stdout();
    let mut out = stdout.lock();
    report.render(format, &mut out)?;
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Lib(Error::Evaluation(msg))) => {
            eprintln!("means-lab: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("means-lab: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("means-lab: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("means-lab: {e}");
            ExitCode::from(2)
        }
    }
}
