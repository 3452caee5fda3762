//! `rop`: decide, test and experiment with arithmetic read-once polynomials.
//!
//! Exit status: 0 YES/ROP, 1 NO/READ_MANY, 2 parse or configuration error,
//! 3 precondition violation, 4 INDETERMINATE.

mod check;
mod experiment;
mod gen;
mod input;
mod testing;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use readonce::charax::TagMode;

use crate::input::{CliError, CliResult, Exit};

#[derive(Parser)]
#[command(
    name = "rop",
    version,
    about = "Arithmetic read-once polynomial toolkit"
)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Fast,
    Auto,
}

impl From<Mode> for TagMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => TagMode::Exact,
            Mode::Fast => TagMode::Fast,
            Mode::Auto => TagMode::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Experiment {
    QnFraction,
    Tau,
    TrivariateEnum,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a polynomial file is read-once.
    Check {
        file: PathBuf,
        /// Expected field modulus; must match the file header.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// How identically-zero multiplicands are recognised.
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
        /// Assignments to draw before giving up.
        #[arg(long, default_value_t = 16)]
        retries: usize,
        #[arg(long)]
        json: bool,
    },
    /// Black-box read-once test on a formula or polynomial file.
    Blackbox {
        file: PathBuf,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        /// Individual degree bound (default: the arity).
        #[arg(long)]
        degree: Option<u32>,
        /// Answer wrongly on this fraction of points.
        #[arg(long)]
        corrupt: Option<f64>,
        /// Run with seeds seed, seed+1, ... and report the rejection rate.
        #[arg(long)]
        repeat: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Property test: distance from read-once polynomials.
    Property {
        file: PathBuf,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long)]
        corrupt: Option<f64>,
        #[arg(long)]
        repeat: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated instance in the text format.
    Gen {
        #[arg(value_enum)]
        kind: gen::GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1009)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Variables a formula actually reads (default: all).
        #[arg(long)]
        vars: Option<usize>,
        /// Monomial density for random-multilinear.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded experiments with CSV or summary output.
    Experiment {
        #[arg(value_enum)]
        name: Experiment,
        /// Oracle file for tau.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// 1-based coordinate to vary for tau.
        #[arg(long)]
        axis: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<Exit> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Check {
            file,
            p,
            seed,
            mode,
            retries,
            json,
        } => check::run(check::CheckArgs {
            file,
            p,
            seed,
            mode: mode.into(),
            retries,
            json,
        }),
        Command::Blackbox {
            file,
            p,
            seed,
            epsilon,
            degree,
            corrupt,
            repeat,
            json,
        } => {
            let args = testing::OracleArgs {
                file,
                p,
                seed,
                corrupt,
                repeat,
                json,
            };
            testing::blackbox(args, degree, epsilon)
        }
        Command::Property {
            file,
            p,
            seed,
            delta,
            corrupt,
            repeat,
            json,
        } => {
            let args = testing::OracleArgs {
                file,
                p,
                seed,
                corrupt,
                repeat,
                json,
            };
            testing::property(args, delta)
        }
        Command::Gen {
            kind,
            n,
            p,
            seed,
            vars,
            density,
            out,
        } => gen::run(gen::GenArgs {
            kind,
            n,
            p,
            seed,
            vars,
            density,
            out,
        }),
        Command::Experiment {
            name,
            input,
            p,
            n,
            n_max,
            samples,
            axis,
            seed,
            json,
            out,
        } => match name {
            Experiment::QnFraction => experiment::qn_fraction(experiment::SweepArgs {
                p: p.ok_or_else(|| CliError::Config("qn-fraction needs --p".into()))?,
                n: n.ok_or_else(|| CliError::Config("qn-fraction needs --n".into()))?,
                n_max,
                samples,
                seed,
                out,
            }),
            Experiment::Tau => experiment::tau(experiment::TauArgs {
                file: input.ok_or_else(|| CliError::Config("tau needs --input".into()))?,
                p,
                samples,
                axis,
                seed,
                json,
                out,
            }),
            Experiment::TrivariateEnum => experiment::trivariate_enum(p.unwrap_or(5)),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(Exit::Config as u8),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit() as u8)
        }
    }
}
