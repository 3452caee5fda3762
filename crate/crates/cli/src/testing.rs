use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use readonce::rof::Oracle;
use readonce::testers::{
    property_test, read_once_field_bound, read_once_test, FailureKind, TestOptions, TestReport,
    Verdict, AMPLIFICATION,
};
use serde::{Deserialize, Serialize};

use crate::input::{load, warn, CliError, CliResult, Exit, Input};

/// JSON shape of a `--repeat` batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub runs: u64,
    pub rejected: u64,
    pub rejection_rate: f64,
    pub first_seed: u64,
    pub reports: Vec<TestReport>,
}

pub struct OracleArgs {
    pub file: PathBuf,
    pub p: Option<u64>,
    pub seed: u64,
    pub corrupt: Option<f64>,
    pub repeat: Option<u64>,
    pub json: bool,
}

fn oracle(input: Input, corrupt: Option<f64>, seed: u64) -> CliResult<Oracle> {
    let oracle = input.into_oracle();
    match corrupt {
        None => Ok(oracle),
        // the corruption pattern depends on the base seed only, so batch runs
        // all see the same function
        Some(delta) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0FF_EE00_D15E_A5E5);
            Ok(oracle.corrupt(delta, &mut rng)?)
        }
    }
}

fn run_batch(
    args: &OracleArgs,
    run: impl Fn(u64) -> readonce::Result<TestReport> + Sync,
) -> CliResult<Exit> {
    match args.repeat {
        None => {
            let report = run(args.seed)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&report);
            }
            Ok(exit_for(report.verdict))
        }
        Some(0) => Err(CliError::Config("--repeat must be at least 1".into())),
        Some(runs) => {
            let reports = (0..runs)
                .into_par_iter()
                .map(|k| run(args.seed.wrapping_add(k)))
                .collect::<readonce::Result<Vec<_>>>()?;
            let rejected = reports.iter().filter(|r| r.verdict == Verdict::No).count() as u64;
            let batch = BatchReport {
                runs,
                rejected,
                rejection_rate: rejected as f64 / runs as f64,
                first_seed: args.seed,
                reports,
            };
            if args.json {
                println!("{}", serde_json::to_string_pretty(&batch)?);
            } else {
                println!(
                    "rejected {}/{} runs (rate {:.4}), seeds {}..{}",
                    batch.rejected,
                    batch.runs,
                    batch.rejection_rate,
                    args.seed,
                    args.seed.wrapping_add(runs - 1)
                );
            }
            Ok(if rejected == 0 { Exit::Yes } else { Exit::No })
        }
    }
}

fn exit_for(v: Verdict) -> Exit {
    match v {
        Verdict::Yes => Exit::Yes,
        Verdict::No => Exit::No,
    }
}

fn print_report(r: &TestReport) {
    let verdict = match r.verdict {
        Verdict::Yes => "YES",
        Verdict::No => "NO",
    };
    println!("verdict: {verdict}");
    if let Some(i) = &r.failing_i {
        let vars: Vec<String> = i.iter().map(|t| format!("x{}", t + 1)).collect();
        let kind = match r.failure_kind {
            Some(FailureKind::NotMultilinear) => "not multilinear",
            Some(FailureKind::NotRop) => "not read-once",
            None => "failed",
        };
        println!("failing restriction: {} ({kind})", vars.join(", "));
    }
    println!("queries: {}", r.queries);
    println!("seed: {}", r.seed);
    println!("repeats: {}", r.repeats);
}

pub fn blackbox(args: OracleArgs, degree: Option<u32>, epsilon: f64) -> CliResult<Exit> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(CliError::Config(format!(
            "--epsilon {epsilon} outside (0, 1]"
        )));
    }
    let input = load(&args.file, args.p)?;
    let n = input.arity();
    let d = degree.unwrap_or(n.max(1) as u32);
    let p = input.modulus();
    let bound = read_once_field_bound(n, d, epsilon);
    if (p as f64) < bound {
        warn(format!(
            "p = {p} is below max(1.5 n^4, d) / epsilon = {bound}; rejection guarantee does not apply"
        ));
    }
    let oracle = oracle(input, args.corrupt, args.seed)?;
    run_batch(&args, |seed| {
        read_once_test(&oracle, d, seed, TestOptions::default())
    })
}

pub fn property(args: OracleArgs, delta: f64) -> CliResult<Exit> {
    if !(delta > 0.0) {
        return Err(CliError::Config(format!(
            "--delta {delta} must be positive"
        )));
    }
    let input = load(&args.file, args.p)?;
    if input.modulus() < 3 {
        return Err(CliError::Precondition(format!(
            "property testing needs p >= 3, got {}",
            input.modulus()
        )));
    }
    let oracle = oracle(input, args.corrupt, args.seed)?;
    run_batch(&args, |seed| {
        property_test(&oracle, delta, AMPLIFICATION, seed, TestOptions::default())
    })
}
