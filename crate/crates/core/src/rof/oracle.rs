use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;

use super::Rof;
use crate::error::{Error, Result};
use crate::ff::{Felt, FieldCtx};
use crate::mpoly::MPoly;

type QueryFn = Box<dyn Fn(&[Felt]) -> Felt + Send + Sync>;

/// Black-box access to a function `GF(p)^n -> GF(p)` that counts queries.
///
/// Queries are pure; the counter is atomic, so an oracle can be shared
/// between threads.
pub struct Oracle {
    ctx: FieldCtx,
    arity: usize,
    query: QueryFn,
    queries: AtomicU64,
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("ctx", &self.ctx)
            .field("arity", &self.arity)
            .field("queries", &self.query_count())
            .finish_non_exhaustive()
    }
}

impl Oracle {
    pub fn from_fn<F>(ctx: FieldCtx, arity: usize, f: F) -> Oracle
    where
        F: Fn(&[Felt]) -> Felt + Send + Sync + 'static,
    {
        Oracle {
            ctx,
            arity,
            query: Box::new(f),
            queries: AtomicU64::new(0),
        }
    }

    pub fn from_poly(p: MPoly) -> Oracle {
        let (ctx, arity) = (p.ctx(), p.arity());
        Self::from_fn(ctx, arity, move |a| p.eval_unchecked(a))
    }

    pub fn from_rof(phi: Rof) -> Oracle {
        let (ctx, arity) = (phi.ctx(), phi.arity());
        Self::from_fn(ctx, arity, move |a| phi.root().eval(a))
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn query(&self, a: &[Felt]) -> Result<Felt> {
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
        self.queries.fetch_add(1, Ordering::Relaxed);
        Ok((self.query)(a))
    }

    /// Queries issued since construction.
    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// Wraps the oracle so that it answers `f(a) + 1` on a pseudorandom
    /// `delta`-fraction of the domain.
    ///
    /// Membership of a point is decided by a hash of the point keyed with a
    /// value drawn from `rng`, so repeated queries get consistent answers and
    /// nothing is materialized. The new oracle starts with a fresh counter.
    pub fn corrupt<R: Rng + ?Sized>(self, delta: f64, rng: &mut R) -> Result<Oracle> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParams(format!(
                "corruption fraction {delta} outside [0, 1]"
            )));
        }
        let key: u64 = rng.random();
        let one = self.ctx.one();
        let base = self.query;
        Ok(Self::from_fn(self.ctx, self.arity, move |a| {
            let v = base(a);
            if is_corrupted(key, a, delta) {
                v + one
            } else {
                v
            }
        }))
    }
}

impl From<MPoly> for Oracle {
    fn from(p: MPoly) -> Self {
        Oracle::from_poly(p)
    }
}

impl From<Rof> for Oracle {
    fn from(phi: Rof) -> Self {
        Oracle::from_rof(phi)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn is_corrupted(key: u64, a: &[Felt], delta: f64) -> bool {
    let h = a
        .iter()
        .fold(splitmix64(key), |h, v| splitmix64(h ^ v.value()));
    // top 53 bits as a uniform double in [0, 1)
    ((h >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < delta
}
