//! Structural decomposition of multilinear polynomials.
//!
//! For a polynomial multilinear in `x_i, x_j` write
//! `P = A*x_i*x_j + B*x_i + C*x_j + D` with `A, B, C, D` free of both. The
//! commutator is `Δ_ij P = P*∂²P − ∂_iP*∂_jP = A*D − B*C`, and `P` can be
//! written `h*g + c` with `x_i` only in `h` and `x_j` only in `g` exactly when
//! `Δ_ij P = c*∂²_ij P` (for nonzero `∂²_ij P`).

mod brute;
mod graph;

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use brute::{brute_force_is_rop, BRUTE_FORCE_LIMIT};
pub use graph::{DisjointSet, GateGraph};

use crate::error::{Error, Result};
use crate::ff::Felt;
use crate::mpoly::{Assignment, MPoly, Monomial};

fn check_pair(p: &MPoly, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::SameVariable(i));
    }
    for v in [i, j] {
        if v >= p.arity() {
            return Err(Error::VariableOutOfRange {
                index: v,
                arity: p.arity(),
            });
        }
    }
    if !p.is_multilinear() {
        return Err(Error::NotMultilinear);
    }
    Ok(())
}

/// `[A, B, C, D]` with `P = A*x_i*x_j + B*x_i + C*x_j + D`.
fn quadrants(p: &MPoly, i: usize, j: usize) -> Result<[MPoly; 4]> {
    let (hi, lo) = p.split_linear(i)?;
    let (a, b) = hi.split_linear(j)?;
    let (c, d) = lo.split_linear(j)?;
    Ok([a, b, c, d])
}

/// The commutator `Δ_ij P`. Symmetric in `i, j`; free of `x_i, x_j`.
pub fn commutator(p: &MPoly, i: usize, j: usize) -> Result<MPoly> {
    check_pair(p, i, j)?;
    let [a, b, c, d] = quadrants(p, i, j)?;
    Ok(&(&a * &d) - &(&b * &c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompResult {
    pub decomposable: bool,
    /// The constant `c` with `Δ_ij P = c*∂²_ij P`, when one exists.
    pub c: Option<Felt>,
    /// `∂²_ij P ≡ 0`: no monomial contains both variables.
    pub degenerate: bool,
}

impl DecompResult {
    fn not_decomposable(degenerate: bool) -> Self {
        Self {
            decomposable: false,
            c: None,
            degenerate,
        }
    }
}

/// Decides whether `P = h*g + c` with `x_i` only in `h` and `x_j` only in `g`.
///
/// The candidate `c` is read off the leading monomial of `∂²_ij P`, then the
/// identity `Δ_ij P = c*∂²_ij P` is checked exactly.
pub fn decompose(p: &MPoly, i: usize, j: usize) -> Result<DecompResult> {
    if i == j {
        return Err(Error::SameVariable(i));
    }
    let vars = p.variables();
    for v in [i, j] {
        if !vars.contains(&v) {
            return Err(Error::VariableNotPresent(v));
        }
    }
    check_pair(p, i, j)?;
    let [a, b, c, d] = quadrants(p, i, j)?;
    let Some((m, s)) = a.leading_term() else {
        return Ok(DecompResult::not_decomposable(true));
    };
    let delta = &(&a * &d) - &(&b * &c);
    let ratio = delta.coefficient(m) / s;
    if delta == a.scale(ratio) {
        Ok(DecompResult {
            decomposable: true,
            c: Some(ratio),
            degenerate: false,
        })
    } else {
        Ok(DecompResult::not_decomposable(false))
    }
}

/// The materialized two-copy polynomial `B_ij^J(P)` over `2n` slots: `x_t` is
/// slot `t`, `y_t` is slot `n + t`, and `y_t` is identified with `x_t` for
/// `t ∈ J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BPoly {
    pub i: usize,
    pub j: usize,
    pub shared: BTreeSet<usize>,
    pub value: MPoly,
}

fn shared_mask(p: &MPoly, i: usize, j: usize, shared: &[usize]) -> Result<Vec<bool>> {
    check_pair(p, i, j)?;
    let mut mask = vec![false; p.arity()];
    for &t in shared {
        if t == i || t == j {
            return Err(Error::IndexOverlap);
        }
        if t >= p.arity() {
            return Err(Error::VariableOutOfRange {
                index: t,
                arity: p.arity(),
            });
        }
        mask[t] = true;
    }
    Ok(mask)
}

pub fn b_poly(p: &MPoly, i: usize, j: usize, shared: &[usize]) -> Result<BPoly> {
    let mask = shared_mask(p, i, j, shared)?;
    let n = p.arity();
    let delta = commutator(p, i, j)?;
    let s = p.partial2(i, j)?;
    let x = |q: &MPoly| q.remap(2 * n, |t| t).expect("in range");
    let y = |q: &MPoly| {
        q.remap(2 * n, |t| if mask[t] { t } else { n + t })
            .expect("in range")
    };
    let value = &(&x(&delta) * &y(&s)) - &(&x(&s) * &y(&delta));
    Ok(BPoly {
        i,
        j,
        shared: shared.iter().copied().collect(),
        value,
    })
}

/// How identically-zero questions about `B` polynomials are answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroTest {
    Exact,
    /// Evaluation at `reps` uniform points; may wrongly report zero.
    Randomized {
        reps: usize,
        seed: u64,
    },
}

/// Groups the terms of `q` by their part in the unshared variables; each
/// group's coefficient is a polynomial in the shared variables.
fn group_by_free(q: &MPoly, mask: &[bool]) -> BTreeMap<Monomial, MPoly> {
    let mut groups: BTreeMap<Monomial, Vec<(Monomial, Felt)>> = BTreeMap::new();
    for (m, c) in q.terms() {
        let (sh, fr): (Vec<_>, Vec<_>) = m.pairs().iter().partition(|(t, _)| mask[*t]);
        groups
            .entry(Monomial::from_exponents(fr))
            .or_default()
            .push((Monomial::from_exponents(sh), c));
    }
    groups
        .into_iter()
        .map(|(k, ts)| {
            let poly = MPoly::from_terms(q.ctx(), q.arity(), ts).expect("subset of q");
            (k, poly)
        })
        .collect()
}

/// Exact zero test for `B_ij^J` without materializing it.
///
/// Splitting `Δ = Σ δ_μ(x_J) μ` and `S = Σ σ_μ(x_J) μ` along monomials `μ`
/// in the unshared variables, `B ≡ 0` iff the coefficient vectors `δ` and
/// `σ` are proportional over the rational functions in `x_J`.
pub(crate) fn b_is_zero_exact(delta: &MPoly, s: &MPoly, mask: &[bool]) -> bool {
    if s.is_zero() || delta.is_zero() {
        return true;
    }
    let dg = group_by_free(delta, mask);
    let sg = group_by_free(s, mask);
    let (nu, s_nu) = sg.iter().next().expect("s is nonzero");
    let zero = MPoly::zero(s.ctx(), s.arity());
    let d_nu = dg.get(nu).unwrap_or(&zero);
    dg.keys().chain(sg.keys()).all(|mu| {
        let d_mu = dg.get(mu).unwrap_or(&zero);
        let s_mu = sg.get(mu).unwrap_or(&zero);
        d_mu * s_nu == s_mu * d_nu
    })
}

pub(crate) fn b_is_zero_randomized(
    delta: &MPoly,
    s: &MPoly,
    mask: &[bool],
    reps: usize,
    seed: u64,
) -> bool {
    let f = s.ctx();
    let n = s.arity();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Assignment = vec![f.zero(); n];
    let mut y: Assignment = vec![f.zero(); n];
    for _ in 0..reps {
        for t in 0..n {
            x[t] = f.sample(&mut rng);
            y[t] = if mask[t] { x[t] } else { f.sample(&mut rng) };
        }
        let v = delta.eval_unchecked(&x) * s.eval_unchecked(&y)
            - s.eval_unchecked(&x) * delta.eval_unchecked(&y);
        if !v.is_zero() {
            return false;
        }
    }
    true
}

/// Whether `B_ij^J(P) ≡ 0`. With `J = ∅` this is `∂²_ij P ≡ 0` or
/// decomposability along `(i, j)`.
pub fn b_is_zero(p: &MPoly, i: usize, j: usize, shared: &[usize], mode: ZeroTest) -> Result<bool> {
    let mask = shared_mask(p, i, j, shared)?;
    if shared.is_empty() && mode == ZeroTest::Exact {
        if p.variables().contains(&i) && p.variables().contains(&j) {
            let r = decompose(p, i, j)?;
            return Ok(r.degenerate || r.decomposable);
        }
        return Ok(true);
    }
    let delta = commutator(p, i, j)?;
    let s = p.partial2(i, j)?;
    Ok(match mode {
        ZeroTest::Exact => b_is_zero_exact(&delta, &s, &mask),
        ZeroTest::Randomized { reps, seed } => b_is_zero_randomized(&delta, &s, &mask, reps, seed),
    })
}

pub fn gate_graph(p: &MPoly) -> GateGraph {
    GateGraph::of(p)
}

/// `P = P_1 + P_2` with non-constant, variable-disjoint parts.
pub fn is_additively_separable(p: &MPoly) -> Result<bool> {
    let found = p.variables().len();
    if found < 2 {
        return Err(Error::TooFewVariables { needed: 2, found });
    }
    Ok(!GateGraph::of(p).is_connected())
}

/// Splits `P` along a cut of its variables into `P_1(x_L) + P_2(x_R)` with
/// the constant term kept in `P_1`.
pub fn additive_split(p: &MPoly, component: &BTreeSet<usize>) -> Result<(MPoly, MPoly)> {
    let vars = p.variables();
    if component.is_empty() || !component.is_subset(&vars) || component.len() == vars.len() {
        return Err(Error::NotSeparableAlongCut);
    }
    let zeros = vec![p.ctx().zero(); p.arity()];
    let rest: Vec<usize> = vars.difference(component).copied().collect();
    let left = p.restrict_many(rest, &zeros)?;
    let right = p
        .restrict_many(component.iter().copied(), &zeros)?
        .add_constant(-p.constant_term());
    if &left + &right != *p {
        return Err(Error::NotSeparableAlongCut);
    }
    Ok((left, right))
}

/// `P = h*g + c` with `x_i` in `h`, `x_j` in `g`, variable-disjoint factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulSplit {
    pub h: MPoly,
    pub g: MPoly,
    pub c: Felt,
}

/// A point where the nonzero multilinear `q` does not vanish, with
/// coordinates in `{0, 1}`.
fn nonvanishing_point(q: &MPoly) -> Assignment {
    let f = q.ctx();
    let mut w = vec![f.zero(); q.arity()];
    let mut q = q.clone();
    for t in q.variables() {
        let r = q.restrict(t, f.zero()).expect("in range");
        if r.is_zero() {
            q = q.restrict(t, f.one()).expect("in range");
            w[t] = f.one();
        } else {
            q = r;
        }
    }
    debug_assert!(!q.is_zero());
    w
}

/// Factors a decomposable `P` as `h*g + c`.
///
/// `g` carries the variables `x_k` that cannot be separated from `x_j`
/// (the irreducible factor of `P - c` through `x_j`) and `h` the rest. The
/// scalar ambiguity is fixed by making `h` monic under graded lex.
pub fn multiplicative_split(p: &MPoly, i: usize, j: usize) -> Result<MulSplit> {
    let r = decompose(p, i, j)?;
    let c = match r.c {
        Some(c) if r.decomposable => c,
        _ => return Err(Error::NotDecomposable),
    };
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in p.variables() {
        if k == j {
            right.push(k);
        } else if k == i || decompose(p, k, j)?.c == Some(c) {
            left.push(k);
        } else {
            right.push(k);
        }
    }
    let q = p.add_constant(-c);
    let w = nonvanishing_point(&q);
    let v = q.eval_unchecked(&w);
    let h = q.restrict_many(right, &w)?;
    let g = q.restrict_many(left, &w)?.scale(v.inv()?);
    let (_, lead) = h.leading_term().ok_or(Error::NotDecomposable)?;
    let h = h.scale(lead.inv()?);
    let g = g.scale(lead);
    if (&h * &g).add_constant(c) != *p {
        return Err(Error::NotDecomposable);
    }
    Ok(MulSplit { h, g, c })
}

/// Read-once test for polynomials with at most three live variables: a
/// trivariate multilinear polynomial is read-once iff at least two of
/// `B_12, B_13, B_23` vanish identically.
pub fn trivariate_is_rop(p: &MPoly) -> Result<bool> {
    if !p.is_multilinear() {
        return Err(Error::NotMultilinear);
    }
    let vars: Vec<usize> = p.variables().into_iter().collect();
    if vars.len() > 3 {
        return Err(Error::TooManyVariables {
            found: vars.len(),
            limit: 3,
        });
    }
    if vars.len() <= 2 {
        return Ok(true);
    }
    let mut zeros = 0;
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        if b_is_zero(p, vars[a], vars[b], &[], ZeroTest::Exact)? {
            zeros += 1;
        }
    }
    Ok(zeros >= 2)
}

/// Decides `(i, j)`-decomposability of `P` from three restrictions
/// `P|x_k=a_t`: if all three decompose with one common `c`, so does `P`.
pub fn restriction_vote_decompose(
    p: &MPoly,
    i: usize,
    j: usize,
    k: usize,
    values: [Felt; 3],
) -> Result<DecompResult> {
    if p.ctx().modulus() < 3 {
        return Err(Error::PreconditionFailure(
            "three distinct field elements are needed".into(),
        ));
    }
    if values[0] == values[1] || values[0] == values[2] || values[1] == values[2] {
        return Err(Error::PreconditionFailure(
            "restriction values must be distinct".into(),
        ));
    }
    if k == i || k == j {
        return Err(Error::IndexOverlap);
    }
    let mut common = None;
    for a in values {
        let r = match decompose(&p.restrict(k, a)?, i, j) {
            Err(Error::VariableNotPresent(_)) => DecompResult::not_decomposable(true),
            r => r?,
        };
        if !r.decomposable {
            return Ok(DecompResult::not_decomposable(false));
        }
        match common {
            None => common = r.c,
            Some(c) if r.c != Some(c) => return Ok(DecompResult::not_decomposable(false)),
            _ => {}
        }
    }
    let r = decompose(p, i, j)?;
    debug_assert!(r.decomposable && r.c == common);
    Ok(r)
}

#[cfg(test)]
mod tests;
