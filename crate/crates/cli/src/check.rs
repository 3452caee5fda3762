use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use readonce::charax::{
    characterize, CharacterizeOptions, MultiplicandKind, TagMode, Verdict, Violation,
};
use serde::{Deserialize, Serialize};

use crate::input::{load_poly, warn, CliError, CliResult, Exit};

/// JSON shape of `rop check --json`. Variable labels are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub p: u64,
    pub n: usize,
    pub seed: u64,
    pub attempts: usize,
    pub assignment: Option<Vec<u64>>,
    pub witness: Option<Vec<usize>>,
    pub violations: Vec<ViolationRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub multiplicand: String,
    pub witness: String,
}

pub fn label(kind: &MultiplicandKind) -> String {
    match kind {
        MultiplicandKind::FirstPartial(t) => format!("dP/dx{}", t + 1),
        MultiplicandKind::SecondPartial(i, j) => format!("d2P/dx{}dx{}", i + 1, j + 1),
        MultiplicandKind::BTerm { i, j, shared } => {
            let set: Vec<String> = shared.iter().map(|t| (t + 1).to_string()).collect();
            format!("B[{},{}; {{{}}}]", i + 1, j + 1, set.join(","))
        }
    }
}

fn record(v: &Violation) -> ViolationRecord {
    ViolationRecord {
        multiplicand: label(&v.multiplicand),
        witness: v.witness.clone(),
    }
}

pub struct CheckArgs {
    pub file: PathBuf,
    pub p: Option<u64>,
    pub seed: u64,
    pub mode: TagMode,
    pub retries: usize,
    pub json: bool,
}

pub fn run(args: CheckArgs) -> CliResult<Exit> {
    let poly = load_poly(&args.file, args.p)?;
    if !poly.is_multilinear() {
        return Err(CliError::Precondition(
            "polynomial is not multilinear".into(),
        ));
    }
    let n = poly.arity();
    let p = poly.ctx().modulus();
    if (p as f64) < 1.5 * (n as f64).powi(3) {
        warn(format!(
            "p = {p} is below 1.5 n^3 = {}; good assignments may be rare",
            1.5 * (n as f64).powi(3)
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let opts = CharacterizeOptions {
        max_retries: args.retries,
        mode: args.mode,
    };
    let ch = characterize(&poly, &mut rng, opts)?;
    let report = CheckReport {
        verdict: ch.verdict,
        p,
        n,
        seed: args.seed,
        attempts: ch.attempts,
        assignment: ch
            .assignment
            .as_ref()
            .map(|a| a.iter().map(|v| v.value()).collect()),
        witness: ch.witness.map(|w| w.iter().map(|t| t + 1).collect()),
        violations: ch
            .last_report
            .as_ref()
            .map(|r| r.violations.iter().map(record).collect())
            .unwrap_or_default(),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_human(&report);
    }
    Ok(match report.verdict {
        Verdict::Rop => Exit::Yes,
        Verdict::ReadMany => Exit::No,
        Verdict::Indeterminate => Exit::Indeterminate,
    })
}

fn print_human(r: &CheckReport) {
    let verdict = match r.verdict {
        Verdict::Rop => "ROP",
        Verdict::ReadMany => "READ_MANY",
        Verdict::Indeterminate => "INDETERMINATE",
    };
    println!("verdict: {verdict}");
    println!("field: GF({}), n = {}", r.p, r.n);
    println!("attempts: {}", r.attempts);
    if let Some(a) = &r.assignment {
        let vals: Vec<String> = a.iter().map(u64::to_string).collect();
        println!("good assignment: ({})", vals.join(", "));
    }
    if let Some(w) = &r.witness {
        let vars: Vec<String> = w.iter().map(|t| format!("x{t}")).collect();
        println!(
            "witness: restriction to {} is not read-once",
            vars.join(", ")
        );
    }
    if !r.violations.is_empty() {
        println!("last assignment was not good:");
        for v in &r.violations {
            println!("  {}", v.witness);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_are_one_based() {
        assert_eq!(label(&MultiplicandKind::FirstPartial(0)), "dP/dx1");
        assert_eq!(label(&MultiplicandKind::SecondPartial(1, 3)), "d2P/dx2dx4");
        let b = MultiplicandKind::BTerm {
            i: 0,
            j: 1,
            shared: vec![2, 4],
        };
        assert_eq!(label(&b), "B[1,2; {3,5}]");
    }

    #[test]
    fn report_json_round_trip() {
        let r = CheckReport {
            verdict: Verdict::Indeterminate,
            p: 7,
            n: 3,
            seed: 1,
            attempts: 16,
            assignment: None,
            witness: None,
            violations: vec![ViolationRecord {
                multiplicand: "dP/dx1".into(),
                witness: "dP/dx1 vanishes at (0, 0, 0)".into(),
            }],
        };
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"INDETERMINATE\""));
        assert_eq!(serde_json::from_str::<CheckReport>(&text).unwrap(), r);
    }
}
