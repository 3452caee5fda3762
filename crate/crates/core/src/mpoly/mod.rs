//! Sparse multivariate polynomials over GF(p).
//!
//! An [`MPoly`] has a fixed arity `n`; variable slots are `0..n` and are never
//! re-indexed by restriction, so restrictions of the same ambient polynomial
//! stay comparable. Terms live in a `BTreeMap` keyed by [`Monomial`] with no
//! zero coefficients, which makes structural equality the same thing as
//! equality of polynomials.

mod interp;
mod monomial;
pub mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

pub use interp::{interpolate_trivariate, TrivariateGrid};
pub use monomial::Monomial;

use crate::error::{Error, Result};
use crate::ff::{Felt, FieldCtx};

/// A point of GF(p)^n.
pub type Assignment = Vec<Felt>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    ctx: FieldCtx,
    arity: usize,
    terms: BTreeMap<Monomial, Felt>,
}

fn accumulate(terms: &mut BTreeMap<Monomial, Felt>, m: Monomial, c: Felt) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = *e.get() + c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

impl MPoly {
    pub fn zero(ctx: FieldCtx, arity: usize) -> Self {
        Self {
            ctx,
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: FieldCtx, arity: usize, c: Felt) -> Self {
        let mut p = Self::zero(ctx, arity);
        accumulate(&mut p.terms, Monomial::one(), c);
        p
    }

    /// The polynomial `x_i` (0-based slot).
    pub fn var(ctx: FieldCtx, arity: usize, i: usize) -> Result<Self> {
        Self::from_terms(ctx, arity, [(Monomial::var(i), ctx.one())])
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, combining
    /// repeats and dropping zeros.
    pub fn from_terms<I>(ctx: FieldCtx, arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Felt)>,
    {
        let mut p = Self::zero(ctx, arity);
        for (m, c) in terms {
            if c.ctx() != ctx {
                return Err(Error::FieldMismatch {
                    left: ctx.modulus(),
                    right: c.ctx().modulus(),
                });
            }
            if let Some(v) = m.max_var() {
                if v >= arity {
                    return Err(Error::VariableOutOfRange { index: v, arity });
                }
            }
            accumulate(&mut p.terms, m, c);
        }
        Ok(p)
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, Felt)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Felt {
        self.terms
            .get(m)
            .copied()
            .unwrap_or_else(|| self.ctx.zero())
    }

    /// The largest term under graded lex.
    pub fn leading_term(&self) -> Option<(&Monomial, Felt)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Felt {
        self.coefficient(&Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_constant)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(Monomial::is_multilinear)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.degree_in(i)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Largest individual degree over all variables.
    pub fn max_individual_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(_, e)| e))
            .max()
            .unwrap_or(0)
    }

    /// Indices of the variables the polynomial depends on. In canonical form
    /// syntactic occurrence and semantic dependence coincide.
    pub fn variables(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
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

    fn check_var(&self, i: usize) -> Result<()> {
        if i >= self.arity {
            Err(Error::VariableOutOfRange {
                index: i,
                arity: self.arity,
            })
        } else {
            Ok(())
        }
    }

    fn check_compatible(&self, other: &MPoly) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::FieldMismatch {
                left: self.ctx.modulus(),
                right: other.ctx.modulus(),
            });
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, a: &[Felt]) -> Result<Felt> {
        self.check_point(a)?;
        Ok(self.eval_unchecked(a))
    }

    pub(crate) fn eval_unchecked(&self, a: &[Felt]) -> Felt {
        let mut acc = self.ctx.zero();
        for (m, &c) in &self.terms {
            let mut t = c;
            for &(i, e) in m.pairs() {
                t *= if e == 1 { a[i] } else { a[i].pow(e as u64) };
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i := alpha`; slot `i` stays in the arity but is unused.
    pub fn restrict(&self, i: usize, alpha: Felt) -> Result<MPoly> {
        self.check_var(i)?;
        if alpha.ctx() != self.ctx {
            return Err(Error::FieldMismatch {
                left: self.ctx.modulus(),
                right: alpha.ctx().modulus(),
            });
        }
        let mut out = MPoly::zero(self.ctx, self.arity);
        for (m, &c) in &self.terms {
            let (rest, e) = m.without(i);
            let c = if e == 0 { c } else { c * alpha.pow(e as u64) };
            accumulate(&mut out.terms, rest, c);
        }
        Ok(out)
    }

    /// Substitutes `x_i := a_i` for every `i` in `vars`. The full-length point
    /// `a` supplies the values; coordinates outside `vars` are ignored.
    pub fn restrict_many<I>(&self, vars: I, a: &[Felt]) -> Result<MPoly>
    where
        I: IntoIterator<Item = usize>,
    {
        self.check_point(a)?;
        let mut mask = vec![false; self.arity];
        for i in vars {
            self.check_var(i)?;
            mask[i] = true;
        }
        let mut out = MPoly::zero(self.ctx, self.arity);
        for (m, &c) in &self.terms {
            let mut coeff = c;
            let mut kept = Vec::with_capacity(m.pairs().len());
            for &(i, e) in m.pairs() {
                if mask[i] {
                    coeff *= a[i].pow(e as u64);
                } else {
                    kept.push((i, e));
                }
            }
            accumulate(&mut out.terms, Monomial::from_exponents(kept), coeff);
        }
        Ok(out)
    }

    /// Writes the polynomial as `hi * x_i + lo` where neither part mentions
    /// `x_i`. Requires individual degree at most 1 in `x_i`.
    pub fn split_linear(&self, i: usize) -> Result<(MPoly, MPoly)> {
        self.check_var(i)?;
        let mut hi = MPoly::zero(self.ctx, self.arity);
        let mut lo = MPoly::zero(self.ctx, self.arity);
        for (m, &c) in &self.terms {
            match m.without(i) {
                (rest, 0) => {
                    lo.terms.insert(rest, c);
                }
                (rest, 1) => {
                    hi.terms.insert(rest, c);
                }
                _ => return Err(Error::NotMultilinearInVar(i)),
            }
        }
        Ok((hi, lo))
    }

    /// `P|x_i=1 - P|x_i=0`, defined only for polynomials multilinear in `x_i`.
    pub fn partial(&self, i: usize) -> Result<MPoly> {
        Ok(self.split_linear(i)?.0)
    }

    /// Mixed second derivative with respect to `x_i` and `x_j`, `i != j`.
    pub fn partial2(&self, i: usize, j: usize) -> Result<MPoly> {
        if i == j {
            return Err(Error::SameVariable(i));
        }
        self.check_var(j)?;
        if self.degree_in(j) > 1 {
            return Err(Error::NotMultilinearInVar(j));
        }
        self.partial(i)?.partial(j)
    }

    pub fn scale(&self, c: Felt) -> MPoly {
        debug_assert_eq!(c.ctx(), self.ctx);
        if c.is_zero() {
            return MPoly::zero(self.ctx, self.arity);
        }
        MPoly {
            ctx: self.ctx,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, &v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_compatible(other)?;
        let mut out = MPoly::zero(self.ctx, self.arity);
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                accumulate(&mut out.terms, m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    /// Adds a constant.
    pub fn add_constant(&self, c: Felt) -> MPoly {
        let mut out = self.clone();
        accumulate(&mut out.terms, Monomial::one(), c);
        out
    }

    /// Renames variables through `map` into a polynomial of arity `new_arity`.
    /// Variables mapped to the same slot multiply together.
    pub fn remap(&self, new_arity: usize, map: impl Fn(usize) -> usize) -> Result<MPoly> {
        let mut out = MPoly::zero(self.ctx, new_arity);
        for (m, &c) in &self.terms {
            let r = m.remap(&map);
            if let Some(v) = r.max_var() {
                if v >= new_arity {
                    return Err(Error::VariableOutOfRange {
                        index: v,
                        arity: new_arity,
                    });
                }
            }
            accumulate(&mut out.terms, r, c);
        }
        Ok(out)
    }

    /// Renumbers the live variables to `0..k` (in increasing order) and
    /// returns the compacted polynomial together with the original indices.
    pub fn compact(&self) -> (MPoly, Vec<usize>) {
        let live: Vec<usize> = self.variables().into_iter().collect();
        let mut slot = vec![usize::MAX; self.arity];
        for (k, &v) in live.iter().enumerate() {
            slot[v] = k;
        }
        let p = self
            .remap(live.len(), |v| slot[v])
            .expect("live variables map into range");
        (p, live)
    }

    /// Randomized non-zero test: `true` iff one of `reps` uniform points of
    /// `samples^n` evaluates to something nonzero. A nonzero polynomial of
    /// total degree `d` is missed with probability at most `(d/|samples|)^reps`.
    pub fn sz_test<R: Rng + ?Sized>(
        &self,
        samples: &[Felt],
        reps: usize,
        rng: &mut R,
    ) -> Result<bool> {
        if samples.is_empty() {
            return Err(Error::EmptySampleSet);
        }
        if reps == 0 {
            return Err(Error::InvalidParams("repetitions must be >= 1".into()));
        }
        if self.is_zero() {
            return Ok(false);
        }
        let mut point = vec![self.ctx.zero(); self.arity];
        for _ in 0..reps {
            for v in point.iter_mut() {
                *v = samples[rng.random_range(0..samples.len())];
            }
            if !self.eval_unchecked(&point).is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Random multilinear polynomial of the given arity: each of the `2^arity`
/// multilinear monomials is present with probability `density` and then gets
/// a uniform nonzero coefficient.
pub fn random_multilinear<R: Rng + ?Sized>(
    ctx: FieldCtx,
    arity: usize,
    density: f64,
    rng: &mut R,
) -> MPoly {
    assert!(
        arity < usize::BITS as usize,
        "arity too large for dense enumeration"
    );
    let mut out = MPoly::zero(ctx, arity);
    for mask in 0..(1usize << arity) {
        if rng.random::<f64>() < density {
            let m = Monomial::product_of((0..arity).filter(|i| mask >> i & 1 == 1));
            out.terms.insert(m, ctx.sample_nonzero(rng));
        }
    }
    out
}

/// Random polynomial with `deg_i <= degs[i]` and uniform coefficients on
/// every monomial of the box (zero coefficients included).
pub fn random_dense<R: Rng + ?Sized>(ctx: FieldCtx, degs: &[u32], rng: &mut R) -> MPoly {
    let arity = degs.len();
    let mut out = MPoly::zero(ctx, arity);
    let mut exps = vec![0u32; arity];
    loop {
        let m = Monomial::from_exponents(exps.iter().copied().enumerate());
        accumulate(&mut out.terms, m, ctx.sample(rng));
        // odometer increment
        let mut k = 0;
        loop {
            if k == arity {
                return out;
            }
            if exps[k] < degs[k] {
                exps[k] += 1;
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    /// Panics on field or arity mismatch; see [`MPoly::checked_add`].
    fn add(self, rhs: &MPoly) -> MPoly {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            ctx: self.ctx,
            arity: self.arity,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), -c)).collect(),
        }
    }
}
