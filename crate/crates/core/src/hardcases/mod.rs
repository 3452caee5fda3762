//! Hard instances: the `Q_n` family, locality sweeps, and Boolean functions
//! that are read-many yet read-once under every single-variable restriction.

mod boolean;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use boolean::{boolean_f, boolean_g, boolean_is_read_once, BoolFn, BOOLEAN_LIMIT};

use crate::charax::is_locally_rop;
use crate::error::{Error, Result};
use crate::ff::{Felt, FieldCtx};
use crate::mpoly::{Assignment, MPoly};

/// `Q_n = (x_1 - 1)...(x_n - 1) + x_1...x_n`, expanded.
pub fn q_n(n: usize, ctx: FieldCtx) -> MPoly {
    let one = MPoly::constant(ctx, n, ctx.one());
    let (mut shifted, mut plain) = (one.clone(), one);
    for i in 0..n {
        let x = MPoly::var(ctx, n, i).expect("in range");
        shifted = &shifted * &x.add_constant(-ctx.one());
        plain = &plain * &x;
    }
    &shifted + &plain
}

/// Number of coordinates of `a` that lie in `set`.
pub fn size_wrt(a: &[Felt], set: &[Felt]) -> usize {
    a.iter().filter(|v| set.contains(v)).count()
}

/// One line of a locality sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: u64,
    pub n: usize,
    pub samples: u64,
    pub good_fraction: f64,
    pub stderr: f64,
}

/// Sweeps up to this many assignments exhaustively instead of sampling.
pub const EXHAUSTIVE_LIMIT: u64 = 2_000_000;

fn decode(ctx: FieldCtx, n: usize, mut idx: u64) -> Assignment {
    let p = ctx.modulus();
    (0..n)
        .map(|_| {
            let v = ctx.elem(idx % p);
            idx /= p;
            v
        })
        .collect()
}

/// Fraction of assignments `a` at which `P` is 3-locally read-once.
///
/// Enumerates all of `GF(p)^n` when it has at most [`EXHAUSTIVE_LIMIT`]
/// points (standard error 0), otherwise draws `samples` uniform points.
pub fn local_rop_fraction<R: Rng + ?Sized>(
    p: &MPoly,
    samples: u64,
    rng: &mut R,
) -> Result<SweepRow> {
    let n = p.arity();
    if n < 3 {
        return Err(Error::ArityTooSmall(n));
    }
    if !p.is_multilinear() {
        return Err(Error::NotMultilinear);
    }
    let ctx = p.ctx();
    let modulus = ctx.modulus();
    let domain = (modulus as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let check = |a: &Assignment| is_locally_rop(p, a).map(|r| r.0);

    let (good, total, exhaustive) = if domain <= EXHAUSTIVE_LIMIT as u128 {
        let total = domain as u64;
        let good = (0..total)
            .into_par_iter()
            .map(|idx| check(&decode(ctx, n, idx)).map(u64::from))
            .sum::<Result<u64>>()?;
        (good, total, true)
    } else {
        if samples == 0 {
            return Err(Error::InvalidParams("need at least one sample".into()));
        }
        let points: Vec<Assignment> = (0..samples)
            .map(|_| (0..n).map(|_| ctx.sample(rng)).collect())
            .collect();
        let good = points
            .par_iter()
            .map(|a| check(a).map(u64::from))
            .sum::<Result<u64>>()?;
        (good, samples, false)
    };
    let frac = good as f64 / total as f64;
    let stderr = if exhaustive {
        0.0
    } else {
        (frac * (1.0 - frac) / total as f64).sqrt()
    };
    Ok(SweepRow {
        p: modulus,
        n,
        samples: total,
        good_fraction: frac,
        stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::brute_force_is_rop;
    use crate::rof::random_rof;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    #[test]
    fn q_n_expansions() {
        let f = gf(101);
        assert_eq!(
            q_n(1, f),
            MPoly::parse("field p=101 n=1\n2*x1 + 100").unwrap()
        );
        let q3 = MPoly::parse(
            "field p=101 n=3\n2*x1*x2*x3 + 100*x1*x2 + 100*x1*x3 + 100*x2*x3 + x1 + x2 + x3 + 100",
        )
        .unwrap();
        assert_eq!(q_n(3, f), q3);
        assert!(!brute_force_is_rop(&q3).unwrap());

        // over GF(2) the top monomial cancels; Q_n stays multilinear
        let g2 = gf(2);
        for n in 1..8 {
            let q = q_n(n, g2);
            assert!(q.is_multilinear());
            assert_eq!(q.total_degree() as usize, n - 1);
        }
    }

    #[test]
    fn q_n_matches_pointwise_definition() {
        let f = gf(13);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..7 {
            let q = q_n(n, f);
            for _ in 0..100 {
                let a: Assignment = (0..n).map(|_| f.sample(&mut rng)).collect();
                let shifted = a.iter().fold(f.one(), |acc, &v| acc * (v - f.one()));
                let plain = a.iter().fold(f.one(), |acc, &v| acc * v);
                assert_eq!(q.evaluate(&a).unwrap(), shifted + plain);
            }
        }
    }

    #[test]
    fn size_examples() {
        let f = gf(7);
        let a: Assignment = [0, 1, 5, 0].iter().map(|&v| f.elem(v)).collect();
        assert_eq!(size_wrt(&a, &[f.zero(), f.one()]), 3);
        assert_eq!(size_wrt(&a, &[]), 0);
        let all: Vec<Felt> = f.elements().collect();
        assert_eq!(size_wrt(&a, &all), 4);
    }

    #[test]
    fn q_n_is_read_many_for_small_n() {
        let f = gf(101);
        for n in 3..=8 {
            assert!(!brute_force_is_rop(&q_n(n, f)).unwrap());
        }
    }

    #[test]
    fn gf2_sweeps_are_exhaustive_and_full() {
        let g2 = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 4..=6 {
            let row = local_rop_fraction(&q_n(n, g2), 10, &mut rng).unwrap();
            assert_eq!(row.samples, 1 << n);
            assert_eq!(row.good_fraction, 1.0);
            assert_eq!(row.stderr, 0.0);
        }
    }

    #[test]
    fn rop_sweep_is_full() {
        let f = gf(101);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_rof(f, 5, 5, &mut rng).unwrap().expand();
        let row = local_rop_fraction(&p, 300, &mut rng).unwrap();
        assert_eq!(row.good_fraction, 1.0);
        assert_eq!(row.samples, 300);
    }

    #[test]
    fn q8_over_gf3_beats_the_bound() {
        let f = gf(3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // 3^8 = 6561 points, so this is exact
        let row = local_rop_fraction(&q_n(8, f), 1000, &mut rng).unwrap();
        assert_eq!(row.samples, 6561);
        let bound = 1.0 - (-8.0f64 / 9.0).exp();
        assert!(row.good_fraction >= bound, "{row:?}");
    }

    #[test]
    fn large_size_wrt_boolean_values_forces_locality() {
        let f = gf(7);
        let q = q_n(6, f);
        let bits = [f.zero(), f.one()];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 1000 {
            let a: Assignment = (0..6)
                .map(|_| {
                    if rng.random_bool(0.7) {
                        bits[rng.random_range(0..2)]
                    } else {
                        f.sample(&mut rng)
                    }
                })
                .collect();
            if size_wrt(&a, &bits) < 4 {
                continue;
            }
            checked += 1;
            assert!(is_locally_rop(&q, &a).unwrap().0, "{a:?}");
        }
    }
}
