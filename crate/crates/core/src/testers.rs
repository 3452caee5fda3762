//! Black-box testers.
//!
//! [`read_once_test`] decides read-once-ness of a polynomial of known degree
//! bound from oracle access: it draws one random point `a`, interpolates
//! each restriction to three variables (the others fixed to `a`) on a
//! `(d+1)^3` grid and checks it. Read-once polynomials always pass.
//!
//! [`property_test`] works with arbitrary functions: each round draws three
//! points that differ in every coordinate and checks the 27-point
//! restrictions for multilinearity and read-once-ness.

use std::collections::HashMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::trivariate_is_rop;
use crate::error::{Error, Result};
use crate::ff::{Felt, FieldCtx};
use crate::mpoly::{Assignment, TrivariateGrid};
use crate::rof::Oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FailureKind {
    NotMultilinear,
    NotRop,
}

/// Outcome of a test run. Serialized with 1-based variable labels in
/// `failing_I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestReport {
    pub verdict: Verdict,
    #[serde(rename = "failing_I", with = "one_based")]
    pub failing_i: Option<Vec<usize>>,
    pub failure_kind: Option<FailureKind>,
    pub queries: u64,
    pub seed: u64,
    pub repeats: u32,
}

mod one_based {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<usize>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|vs| vs.iter().map(|i| i + 1).collect::<Vec<_>>())
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<usize>>, D::Error> {
        let raw: Option<Vec<usize>> = Option::deserialize(d)?;
        raw.map(|vs| {
            vs.into_iter()
                .map(|i| {
                    i.checked_sub(1)
                        .ok_or_else(|| D::Error::custom("labels start at 1"))
                })
                .collect()
        })
        .transpose()
    }
}

impl TestReport {
    fn new(seed: u64) -> Self {
        Self {
            verdict: Verdict::Yes,
            failing_i: None,
            failure_kind: None,
            queries: 0,
            seed,
            repeats: 1,
        }
    }

    fn fail(&mut self, subset: Vec<usize>, kind: FailureKind) {
        self.verdict = Verdict::No;
        self.failing_i = Some(subset);
        self.failure_kind = Some(kind);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestOptions {
    /// Remember answers by point; disable for exact query accounting.
    pub cache: bool,
}

impl Default for TestOptions {
    fn default() -> Self {
        Self { cache: true }
    }
}

struct Querier<'a> {
    oracle: &'a Oracle,
    cache: Option<HashMap<Assignment, Felt>>,
    issued: u64,
}

impl<'a> Querier<'a> {
    fn new(oracle: &'a Oracle, opts: TestOptions) -> Self {
        Self {
            oracle,
            cache: opts.cache.then(HashMap::new),
            issued: 0,
        }
    }

    fn query(&mut self, a: &[Felt]) -> Result<Felt> {
        if let Some(v) = self.cache.as_ref().and_then(|c| c.get(a)) {
            return Ok(*v);
        }
        let v = self.oracle.query(a)?;
        self.issued += 1;
        if let Some(c) = self.cache.as_mut() {
            c.insert(a.to_vec(), v);
        }
        Ok(v)
    }
}

/// The kept variable sets: all triples in lexicographic order, or all
/// variables at once when there are fewer than three.
fn subsets(n: usize) -> Vec<Vec<usize>> {
    if n < 3 {
        vec![(0..n).collect()]
    } else {
        (0..n).combinations(3).collect()
    }
}

/// Interpolates the restriction of the oracle to `subset` (others fixed to
/// `base`) over the given per-variable nodes and checks it.
fn check_subset(
    q: &mut Querier,
    base: &[Felt],
    subset: &[usize],
    nodes: &[Vec<Felt>],
) -> Result<Option<FailureKind>> {
    let zero = base.first().map(|v| v.ctx().zero());
    let axes: [Vec<Felt>; 3] = std::array::from_fn(|t| {
        if t < subset.len() {
            nodes[t].clone()
        } else {
            vec![zero.expect("nonempty subset")]
        }
    });
    let grid = TrivariateGrid::new(axes)?;
    let mut x = base.to_vec();
    let mut values = Vec::new();
    for pt in grid.points() {
        for (t, &v) in subset.iter().enumerate() {
            x[v] = pt[t];
        }
        values.push(q.query(&x)?);
    }
    let r = grid.interpolate(&values)?;
    if !r.is_multilinear() {
        return Ok(Some(FailureKind::NotMultilinear));
    }
    if !trivariate_is_rop(&r)? {
        return Ok(Some(FailureKind::NotRop));
    }
    Ok(None)
}

/// Field size `max(1.5 n^4, d) / ε` under which the read-once tester's
/// rejection guarantee holds.
pub fn read_once_field_bound(n: usize, degree: u32, epsilon: f64) -> f64 {
    (1.5 * (n as f64).powi(4)).max(degree as f64) / epsilon
}

/// One-sided read-once test for an oracle of individual degree at most
/// `degree`. Without the cache it issues exactly `C(n,3) (d+1)^3` queries
/// on a passing run.
pub fn read_once_test(
    oracle: &Oracle,
    degree: u32,
    seed: u64,
    opts: TestOptions,
) -> Result<TestReport> {
    if degree < 1 {
        return Err(Error::DegreeTooSmall);
    }
    let f = oracle.ctx();
    if f.modulus() <= degree as u64 {
        return Err(Error::FieldTooSmall {
            p: f.modulus(),
            reason: format!("interpolation needs {} distinct nodes", degree as u64 + 1),
        });
    }
    let n = oracle.arity();
    let mut report = TestReport::new(seed);
    if n == 0 {
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Assignment = (0..n).map(|_| f.sample(&mut rng)).collect();
    let axis: Vec<Felt> = (0..=degree as u64).map(|v| f.elem(v)).collect();
    let nodes = [axis.clone(), axis.clone(), axis];
    let mut q = Querier::new(oracle, opts);
    for subset in subsets(n) {
        if let Some(kind) = check_subset(&mut q, &a, &subset, &nodes)? {
            report.fail(subset, kind);
            break;
        }
    }
    report.queries = q.issued;
    Ok(report)
}

fn require_three_elements(f: FieldCtx) -> Result<()> {
    if f.modulus() < 3 {
        return Err(Error::FieldTooSmall {
            p: f.modulus(),
            reason: "three distinct values per coordinate are needed".into(),
        });
    }
    Ok(())
}

/// Three points whose coordinates are pairwise distinct in every position.
fn distinct_triple<R: Rng + ?Sized>(f: FieldCtx, n: usize, rng: &mut R) -> [Assignment; 3] {
    let mut pts: [Assignment; 3] = Default::default();
    for _ in 0..n {
        let a = f.sample(rng);
        let b = loop {
            let v = f.sample(rng);
            if v != a {
                break v;
            }
        };
        let c = loop {
            let v = f.sample(rng);
            if v != a && v != b {
                break v;
            }
        };
        pts[0].push(a);
        pts[1].push(b);
        pts[2].push(c);
    }
    pts
}

fn property_round<R: Rng + ?Sized>(
    q: &mut Querier,
    rng: &mut R,
) -> Result<Option<(Vec<usize>, FailureKind)>> {
    let f = q.oracle.ctx();
    let n = q.oracle.arity();
    let [a, b, c] = distinct_triple(f, n, rng);
    for subset in subsets(n) {
        if subset.is_empty() {
            break;
        }
        let nodes: Vec<Vec<Felt>> = subset.iter().map(|&i| vec![a[i], b[i], c[i]]).collect();
        if let Some(kind) = check_subset(q, &a, &subset, &nodes)? {
            return Ok(Some((subset, kind)));
        }
    }
    Ok(None)
}

/// A single round of the property tester: `C(n,3) * 27` queries without the
/// cache.
pub fn property_test_once(oracle: &Oracle, seed: u64, opts: TestOptions) -> Result<TestReport> {
    require_three_elements(oracle.ctx())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = Querier::new(oracle, opts);
    let mut report = TestReport::new(seed);
    if let Some((subset, kind)) = property_round(&mut q, &mut rng)? {
        report.fail(subset, kind);
    }
    report.queries = q.issued;
    Ok(report)
}

/// Default amplification constant for [`property_test`].
pub const AMPLIFICATION: f64 = 3.0;

/// Rounds used by [`property_test`]: `ceil(k / (δ + n^-4))`.
pub fn property_repeats(n: usize, delta: f64, k: f64) -> u32 {
    if n == 0 {
        return 1;
    }
    (k / (delta + (n as f64).powi(-4))).ceil().max(1.0) as u32
}

/// Property tester for distance `delta` from read-once polynomials: repeats
/// [`property_test_once`] `ceil(k / (δ + n^-4))` times (fresh points each
/// round, one shared random stream) and rejects if any round rejects.
/// `repeats` in the report counts the rounds actually run.
pub fn property_test(
    oracle: &Oracle,
    delta: f64,
    k: f64,
    seed: u64,
    opts: TestOptions,
) -> Result<TestReport> {
    require_three_elements(oracle.ctx())?;
    if !(delta > 0.0) || !(k > 0.0) {
        return Err(Error::InvalidParams(format!(
            "delta and k must be positive, got {delta} and {k}"
        )));
    }
    let rounds = property_repeats(oracle.arity(), delta, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TestReport::new(seed);
    report.repeats = 0;
    for _ in 0..rounds {
        // the cache only helps inside a round; points are fresh across rounds
        let mut q = Querier::new(oracle, opts);
        let failure = property_round(&mut q, &mut rng)?;
        report.queries += q.issued;
        report.repeats += 1;
        if let Some((subset, kind)) = failure {
            report.fail(subset, kind);
            break;
        }
    }
    Ok(report)
}

/// Three points differing only in coordinate `coord`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedTriple {
    pub base: Assignment,
    pub coord: usize,
    pub values: [Felt; 3],
}

impl AlignedTriple {
    /// Whether the line through the three answers has degree at most one.
    pub fn is_linear_for(&self, oracle: &Oracle) -> Result<bool> {
        let mut x = self.base.clone();
        let mut ys = [oracle.ctx().zero(); 3];
        for (y, &v) in ys.iter_mut().zip(&self.values) {
            x[self.coord] = v;
            *y = oracle.query(&x)?;
        }
        let [v1, v2, v3] = self.values;
        Ok((ys[1] - ys[0]) * (v3 - v1) == (ys[2] - ys[0]) * (v2 - v1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauEstimate {
    /// Fraction of sampled aligned triples that were not linear.
    pub fraction: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Estimates the probability that a random aligned triple is not linear.
/// `axis` pins the varying coordinate; otherwise it is uniform.
pub fn tau_estimate(
    oracle: &Oracle,
    samples: u64,
    axis: Option<usize>,
    seed: u64,
) -> Result<TauEstimate> {
    let f = oracle.ctx();
    require_three_elements(f)?;
    let n = oracle.arity();
    if samples == 0 || n == 0 {
        return Err(Error::InvalidParams(
            "need at least one sample and one variable".into(),
        ));
    }
    if let Some(i) = axis {
        if i >= n {
            return Err(Error::VariableOutOfRange { index: i, arity: n });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0u64;
    for _ in 0..samples {
        let base: Assignment = (0..n).map(|_| f.sample(&mut rng)).collect();
        let coord = axis.unwrap_or_else(|| rng.random_range(0..n));
        let [a, b, c] = distinct_triple(f, 1, &mut rng);
        let triple = AlignedTriple {
            base,
            coord,
            values: [a[0], b[0], c[0]],
        };
        if !triple.is_linear_for(oracle)? {
            bad += 1;
        }
    }
    let frac = bad as f64 / samples as f64;
    Ok(TauEstimate {
        fraction: frac,
        stderr: (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
    })
}
