use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use readonce::decomp::{brute_force_is_rop, trivariate_is_rop};
use readonce::hardcases::{local_rop_fraction, q_n, SweepRow};
use readonce::testers::tau_estimate;
use readonce::{Felt, FieldCtx, MPoly, Monomial};
use serde::{Deserialize, Serialize};

use crate::input::{emit, load, CliError, CliResult, Exit};

/// Largest `p^8` accepted by `trivariate-enum`.
pub const ENUM_LIMIT: u64 = 10_000_000;
/// Largest arity accepted by `qn-fraction`.
pub const SWEEP_MAX_N: usize = 16;
pub const SWEEP_MAX_SAMPLES: u64 = 1_000_000;
pub const TAU_MAX_SAMPLES: u64 = 10_000_000;

fn guard(msg: String) -> CliError {
    CliError::Precondition(format!("scale guard exceeded: {msg}"))
}

pub struct SweepArgs {
    pub p: u64,
    pub n: usize,
    pub n_max: Option<usize>,
    pub samples: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

/// Rows of `p,n,samples,good_fraction,stderr` for `Q_n`, `n` in
/// `n..=n_max`.
pub fn qn_fraction(args: SweepArgs) -> CliResult<Exit> {
    let ctx = FieldCtx::new(args.p)?;
    let n_max = args.n_max.unwrap_or(args.n);
    if args.n < 3 || n_max < args.n {
        return Err(CliError::Config(format!(
            "need 3 <= n <= n-max, got n={} n-max={n_max}",
            args.n
        )));
    }
    if n_max > SWEEP_MAX_N {
        return Err(guard(format!("n-max {n_max} > {SWEEP_MAX_N}")));
    }
    if args.samples > SWEEP_MAX_SAMPLES {
        return Err(guard(format!(
            "{} samples > {SWEEP_MAX_SAMPLES}",
            args.samples
        )));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for n in args.n..=n_max {
        // one stream per row, so a row does not depend on the range it is in
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add(n as u64));
        let row: SweepRow = local_rop_fraction(&q_n(n, ctx), args.samples, &mut rng)?;
        w.serialize(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Config(e.to_string()))?;
    emit(args.out.as_ref(), &String::from_utf8_lossy(&bytes))?;
    Ok(Exit::Yes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauRow {
    pub p: u64,
    pub n: usize,
    /// 1-based varying coordinate, empty when drawn at random.
    pub axis: Option<usize>,
    pub samples: u64,
    pub fraction: f64,
    pub stderr: f64,
}

pub struct TauArgs {
    pub file: PathBuf,
    pub p: Option<u64>,
    pub samples: u64,
    pub axis: Option<usize>,
    pub seed: u64,
    pub json: bool,
    pub out: Option<PathBuf>,
}

pub fn tau(args: TauArgs) -> CliResult<Exit> {
    if args.samples > TAU_MAX_SAMPLES {
        return Err(guard(format!(
            "{} samples > {TAU_MAX_SAMPLES}",
            args.samples
        )));
    }
    let axis = match args.axis {
        Some(0) => return Err(CliError::Config("--axis is 1-based".into())),
        a => a.map(|a| a - 1),
    };
    let input = load(&args.file, args.p)?;
    let (p, n) = (input.modulus(), input.arity());
    let est = tau_estimate(&input.into_oracle(), args.samples, axis, args.seed)?;
    let row = TauRow {
        p,
        n,
        axis: args.axis,
        samples: est.samples,
        fraction: est.fraction,
        stderr: est.stderr,
    };
    let text = if args.json {
        serde_json::to_string_pretty(&row)? + "\n"
    } else {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&row)?;
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Config(e.to_string()))?;
        String::from_utf8_lossy(&bytes).into_owned()
    };
    emit(args.out.as_ref(), &text)?;
    Ok(Exit::Yes)
}

/// Compares the trivariate criterion with the brute-force decider on every
/// multilinear polynomial in three variables over GF(p).
pub fn trivariate_enum(p: u64) -> CliResult<Exit> {
    let ctx = FieldCtx::new(p)?;
    let cases = p
        .checked_pow(8)
        .filter(|&c| c <= ENUM_LIMIT)
        .ok_or_else(|| guard(format!("p^8 > {ENUM_LIMIT}")))?;
    let monos: Vec<Monomial> = (0..8usize)
        .map(|mask| Monomial::product_of((0..3).filter(|i| mask >> i & 1 == 1)))
        .collect();
    let disagreements: u64 = (0..cases)
        .into_par_iter()
        .map(|mut code| -> readonce::Result<u64> {
            let terms: Vec<(Monomial, Felt)> = monos
                .iter()
                .map(|m| {
                    let c = ctx.elem(code % p);
                    code /= p;
                    (m.clone(), c)
                })
                .collect();
            let poly = MPoly::from_terms(ctx, 3, terms)?;
            Ok(u64::from(
                trivariate_is_rop(&poly)? != brute_force_is_rop(&poly)?,
            ))
        })
        .sum::<readonce::Result<u64>>()?;
    println!("{cases} cases, {disagreements} disagreements");
    Ok(if disagreements == 0 {
        Exit::Yes
    } else {
        Exit::No
    })
}
