//! Deciding read-once-ness from trivariate restrictions.
//!
//! An assignment `a` is *good* for `P` when every multiplicand of the
//! certificate polynomial that is not identically zero stays nonzero after
//! substituting `x := a`. The multiplicands are the first partials
//! `∂_t P`, the mixed partials `∂²_ij P`, and for every pair `i < j` the
//! polynomials `B_ij^J(P)` for a family of sets `J`:
//!
//! * [`Scope::Local`]: `J = {k}` for each `k ∉ {i, j}`;
//! * [`Scope::Global`]: `J = [n] \ {i, j, m}` for each `m ∉ {i, j}`.
//!
//! At a good assignment (global scope) `P` is read-once iff every restriction
//! of `P` to three variables, the others fixed to `a`, is read-once.

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::{b_is_zero_exact, b_is_zero_randomized, commutator, trivariate_is_rop};
use crate::error::{Error, Result};
use crate::ff::{Felt, FieldCtx};
use crate::mpoly::{Assignment, MPoly};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MultiplicandKind {
    FirstPartial(usize),
    SecondPartial(usize, usize),
    BTerm {
        i: usize,
        j: usize,
        shared: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplicand {
    pub kind: MultiplicandKind,
    pub identically_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Local,
    Global,
}

/// How the identically-zero tags of `B` multiplicands are decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TagMode {
    Exact,
    /// Evaluation at [`FAST_REPS`] random points per multiplicand.
    Fast,
    /// Exact up to [`AUTO_EXACT_LIMIT`] variables, fast above.
    #[default]
    Auto,
}

pub const FAST_REPS: usize = 40;
pub const AUTO_EXACT_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub multiplicand: MultiplicandKind,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodnessReport {
    pub good: bool,
    pub violations: Vec<Violation>,
    pub skipped_zero: usize,
}

struct PairData {
    i: usize,
    j: usize,
    delta: MPoly,
    s: MPoly,
}

struct BCheck {
    pair: usize,
    shared: Vec<usize>,
}

/// Precomputed multiplicands of one polynomial, for checking many
/// assignments.
pub struct Certifier {
    ctx: FieldCtx,
    arity: usize,
    multiplicands: Vec<Multiplicand>,
    first: Vec<(usize, MPoly)>,
    pairs: Vec<PairData>,
    // indices into `pairs` whose mixed partial is nonzero
    second: Vec<usize>,
    bterms: Vec<BCheck>,
}

fn shared_sets(n: usize, i: usize, j: usize, scope: Scope) -> Vec<Vec<usize>> {
    let others: Vec<usize> = (0..n).filter(|&t| t != i && t != j).collect();
    match scope {
        Scope::Local => others.iter().map(|&k| vec![k]).collect(),
        Scope::Global => others
            .iter()
            .map(|&m| others.iter().copied().filter(|&t| t != m).collect())
            .collect(),
    }
}

fn describe(a: &[Felt]) -> String {
    let vals: Vec<String> = a.iter().map(|v| v.to_string()).collect();
    format!("({})", vals.join(", "))
}

impl Certifier {
    pub fn new(p: &MPoly, scope: Scope, mode: TagMode) -> Result<Self> {
        if !p.is_multilinear() {
            return Err(Error::NotMultilinear);
        }
        let n = p.arity();
        let exact = match mode {
            TagMode::Exact => true,
            TagMode::Fast => false,
            TagMode::Auto => n <= AUTO_EXACT_LIMIT,
        };
        let mut multiplicands = Vec::new();
        let mut first = Vec::new();
        for t in 0..n {
            let d = p.partial(t)?;
            multiplicands.push(Multiplicand {
                kind: MultiplicandKind::FirstPartial(t),
                identically_zero: d.is_zero(),
            });
            if !d.is_zero() {
                first.push((t, d));
            }
        }
        let mut pairs = Vec::new();
        let mut second = Vec::new();
        for (i, j) in (0..n).tuple_combinations() {
            let s = p.partial2(i, j)?;
            multiplicands.push(Multiplicand {
                kind: MultiplicandKind::SecondPartial(i, j),
                identically_zero: s.is_zero(),
            });
            if !s.is_zero() {
                second.push(pairs.len());
            }
            let delta = commutator(p, i, j)?;
            pairs.push(PairData { i, j, delta, s });
        }
        let mut bterms = Vec::new();
        for (idx, pd) in pairs.iter().enumerate() {
            for shared in shared_sets(n, pd.i, pd.j, scope) {
                let mut mask = vec![false; n];
                for &t in &shared {
                    mask[t] = true;
                }
                let zero = if exact {
                    b_is_zero_exact(&pd.delta, &pd.s, &mask)
                } else {
                    let seed = (idx * n + shared.len()) as u64 ^ 0x5EED;
                    pd.s.is_zero() || b_is_zero_randomized(&pd.delta, &pd.s, &mask, FAST_REPS, seed)
                };
                if !zero {
                    bterms.push(BCheck {
                        pair: idx,
                        shared: shared.clone(),
                    });
                }
                multiplicands.push(Multiplicand {
                    kind: MultiplicandKind::BTerm {
                        i: pd.i,
                        j: pd.j,
                        shared,
                    },
                    identically_zero: zero,
                });
            }
        }
        Ok(Self {
            ctx: p.ctx(),
            arity: n,
            multiplicands,
            first,
            pairs,
            second,
            bterms,
        })
    }

    pub fn multiplicands(&self) -> &[Multiplicand] {
        &self.multiplicands
    }

    fn check_point(&self, a: &[Felt]) -> Result<()> {
        if a.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: a.len(),
            });
        }
        if let Some(bad) = a.iter().find(|v| v.ctx() != self.ctx) {
            return Err(Error::FieldMismatch {
                left: self.ctx.modulus(),
                right: bad.ctx().modulus(),
            });
        }
        Ok(())
    }

    /// `Δ(a)*S|_{x_J=a_J} − S(a)*Δ|_{x_J=a_J}` is not the zero polynomial.
    fn b_term_survives(&self, b: &BCheck, a: &[Felt]) -> bool {
        let pd = &self.pairs[b.pair];
        let (da, sa) = (pd.delta.eval_unchecked(a), pd.s.eval_unchecked(a));
        if da.is_zero() && sa.is_zero() {
            return false;
        }
        let sj =
            pd.s.restrict_many(b.shared.iter().copied(), a)
                .expect("valid");
        let dj = pd
            .delta
            .restrict_many(b.shared.iter().copied(), a)
            .expect("valid");
        sj.scale(da) != dj.scale(sa)
    }

    /// Goodness with early exit on the first violation.
    pub fn is_good(&self, a: &[Felt]) -> Result<bool> {
        self.check_point(a)?;
        Ok(self
            .first
            .iter()
            .all(|(_, d)| !d.eval_unchecked(a).is_zero())
            && self
                .second
                .iter()
                .all(|&k| !self.pairs[k].s.eval_unchecked(a).is_zero())
            && self.bterms.iter().all(|b| self.b_term_survives(b, a)))
    }

    /// Full report listing every violated multiplicand.
    pub fn report(&self, a: &[Felt]) -> Result<GoodnessReport> {
        self.check_point(a)?;
        let at = describe(a);
        let mut violations = Vec::new();
        for (t, d) in &self.first {
            if d.eval_unchecked(a).is_zero() {
                violations.push(Violation {
                    multiplicand: MultiplicandKind::FirstPartial(*t),
                    witness: format!("dP/dx{} vanishes at {at}", t + 1),
                });
            }
        }
        for &k in &self.second {
            let pd = &self.pairs[k];
            if pd.s.eval_unchecked(a).is_zero() {
                violations.push(Violation {
                    multiplicand: MultiplicandKind::SecondPartial(pd.i, pd.j),
                    witness: format!("d2P/dx{}dx{} vanishes at {at}", pd.i + 1, pd.j + 1),
                });
            }
        }
        for b in &self.bterms {
            if !self.b_term_survives(b, a) {
                let pd = &self.pairs[b.pair];
                violations.push(Violation {
                    multiplicand: MultiplicandKind::BTerm {
                        i: pd.i,
                        j: pd.j,
                        shared: b.shared.clone(),
                    },
                    witness: format!(
                        "B({},{}) with shared {{{}}} vanishes identically in y at x = {at}",
                        pd.i + 1,
                        pd.j + 1,
                        b.shared.iter().map(|t| (t + 1).to_string()).join(",")
                    ),
                });
            }
        }
        Ok(GoodnessReport {
            good: violations.is_empty(),
            violations,
            skipped_zero: self
                .multiplicands
                .iter()
                .filter(|m| m.identically_zero)
                .count(),
        })
    }
}

/// All multiplicands of the certificate polynomial, each tagged with whether
/// it vanishes identically (tags decided exactly).
pub fn phi_multiplicands(p: &MPoly, scope: Scope) -> Result<Vec<Multiplicand>> {
    Ok(Certifier::new(p, scope, TagMode::Exact)?.multiplicands)
}

pub fn is_good_assignment(p: &MPoly, a: &[Felt], scope: Scope) -> Result<GoodnessReport> {
    Certifier::new(p, scope, TagMode::Exact)?.report(a)
}

/// Checks every restriction of `P` to three variables (the rest fixed to
/// `a`) for read-once-ness, in lexicographic order of the kept triple.
/// Returns the first failing triple.
pub fn is_locally_rop(p: &MPoly, a: &[Felt]) -> Result<(bool, Option<[usize; 3]>)> {
    if !p.is_multilinear() {
        return Err(Error::NotMultilinear);
    }
    let n = p.arity();
    if a.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: a.len(),
        });
    }
    for (i, j, k) in (0..n).tuple_combinations() {
        let rest = (0..n).filter(|&t| t != i && t != j && t != k);
        let q = p.restrict_many(rest, a)?;
        if !trivariate_is_rop(&q)? {
            return Ok((false, Some([i, j, k])));
        }
    }
    Ok((true, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Rop,
    ReadMany,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterizeOptions {
    pub max_retries: usize,
    pub mode: TagMode,
}

impl Default for CharacterizeOptions {
    fn default() -> Self {
        Self {
            max_retries: 16,
            mode: TagMode::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Characterization {
    pub verdict: Verdict,
    /// The certified good assignment the verdict rests on.
    pub assignment: Option<Assignment>,
    /// First triple whose restriction is not read-once.
    pub witness: Option<[usize; 3]>,
    /// Assignments drawn.
    pub attempts: usize,
    /// Why the last drawn assignment was rejected, when none was good.
    pub last_report: Option<GoodnessReport>,
}

/// Decides whether `P` is read-once by drawing assignments until one is
/// certified good and then checking all trivariate restrictions there.
/// Never answers wrongly; gives up with [`Verdict::Indeterminate`] after
/// `max_retries` bad draws.
pub fn characterize<R: Rng + ?Sized>(
    p: &MPoly,
    rng: &mut R,
    opts: CharacterizeOptions,
) -> Result<Characterization> {
    if !p.is_multilinear() {
        return Err(Error::NotMultilinear);
    }
    let n = p.arity();
    if n < 3 {
        return Ok(Characterization {
            verdict: Verdict::Rop,
            assignment: None,
            witness: None,
            attempts: 0,
            last_report: None,
        });
    }
    let cert = Certifier::new(p, Scope::Global, opts.mode)?;
    let f = p.ctx();
    let mut last = None;
    for attempt in 1..=opts.max_retries {
        let a: Assignment = (0..n).map(|_| f.sample(rng)).collect();
        if cert.is_good(&a)? {
            let (local, witness) = is_locally_rop(p, &a)?;
            return Ok(Characterization {
                verdict: if local {
                    Verdict::Rop
                } else {
                    Verdict::ReadMany
                },
                assignment: Some(a),
                witness,
                attempts: attempt,
                last_report: None,
            });
        }
        last = Some(a);
    }
    Ok(Characterization {
        verdict: Verdict::Indeterminate,
        assignment: None,
        witness: None,
        attempts: opts.max_retries,
        last_report: last.map(|a| cert.report(&a)).transpose()?,
    })
}
