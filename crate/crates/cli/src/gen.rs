use std::path::PathBuf;

use clap::ValueEnum;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use readonce::hardcases::q_n;
use readonce::mpoly::random_multilinear;
use readonce::rof::random_rof;
use readonce::FieldCtx;

use crate::input::{emit, CliError, CliResult, Exit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Rof,
    Qn,
    RandomMultilinear,
}

pub struct GenArgs {
    pub kind: GenKind,
    pub n: usize,
    pub p: u64,
    pub seed: u64,
    pub vars: Option<usize>,
    pub density: f64,
    pub out: Option<PathBuf>,
}

/// Dense generation enumerates `2^n` monomials.
const MAX_DENSE_ARITY: usize = 20;

pub fn run(args: GenArgs) -> CliResult<Exit> {
    let ctx = FieldCtx::new(args.p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let text = match args.kind {
        GenKind::Rof => {
            let used = args.vars.unwrap_or(args.n);
            random_rof(ctx, args.n, used, &mut rng)?.to_text()
        }
        GenKind::Qn => {
            if args.n > MAX_DENSE_ARITY {
                return Err(CliError::Config(format!(
                    "qn supports n <= {MAX_DENSE_ARITY}"
                )));
            }
            q_n(args.n, ctx).to_text()
        }
        GenKind::RandomMultilinear => {
            if args.n > MAX_DENSE_ARITY {
                return Err(CliError::Config(format!(
                    "random-multilinear supports n <= {MAX_DENSE_ARITY}"
                )));
            }
            if !(0.0..=1.0).contains(&args.density) {
                return Err(CliError::Config(format!(
                    "--density {} outside [0, 1]",
                    args.density
                )));
            }
            random_multilinear(ctx, args.n, args.density, &mut rng).to_text()
        }
    };
    emit(args.out.as_ref(), &text)?;
    Ok(Exit::Yes)
}
