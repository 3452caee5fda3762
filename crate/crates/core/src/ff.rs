//! Prime field arithmetic over GF(p) for primes below 2^61.
//!
//! A [`FieldCtx`] is just the validated modulus, so it is `Copy` and every
//! [`Felt`] carries its own context. Mixing elements of different fields is a
//! logic error: the operator impls `debug_assert!` on it, and polynomial-level
//! operations report [`Error::FieldMismatch`].

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported modulus, 2^61 - 1 (itself a Mersenne prime).
pub const MAX_MODULUS: u64 = (1 << 61) - 1;

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldCtx {
    p: u64,
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=MAX_MODULUS).contains(&p) {
            return Err(Error::OutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Number of elements, as `usize` (saturating on 32-bit targets).
    pub fn size(&self) -> usize {
        usize::try_from(self.p).unwrap_or(usize::MAX)
    }

    #[inline]
    pub fn zero(&self) -> Felt {
        Felt {
            value: 0,
            ctx: *self,
        }
    }

    #[inline]
    pub fn one(&self) -> Felt {
        self.elem(1)
    }

    /// The residue of `v` modulo p.
    #[inline]
    pub fn elem(&self, v: u64) -> Felt {
        Felt {
            value: v % self.p,
            ctx: *self,
        }
    }

    /// The residue of a signed integer.
    pub fn elem_i64(&self, v: i64) -> Felt {
        self.elem((v as i128).rem_euclid(self.p as i128) as u64)
    }

    /// Uniform element drawn from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Felt {
        Felt {
            value: rng.random_range(0..self.p),
            ctx: *self,
        }
    }

    /// Uniform nonzero element drawn from `rng`.
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Felt {
        Felt {
            value: rng.random_range(1..self.p),
            ctx: *self,
        }
    }

    /// Iterates over every element of the field in increasing residue order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + '_ {
        (0..self.p).map(|v| self.elem(v))
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// An element of GF(p), stored as its canonical residue in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Felt {
    value: u64,
    ctx: FieldCtx,
}

impl Felt {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn pow(self, mut exp: u64) -> Felt {
        let mut base = self;
        let mut acc = self.ctx.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Felt> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        let p = self.ctx.p as i128;
        let (mut r0, mut r1) = (p, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.ctx.elem(t0.rem_euclid(p) as u64))
    }

    pub fn checked_div(self, rhs: Felt) -> Result<Felt> {
        Ok(self * rhs.inv()?)
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Felt {
    type Output = Felt;
    #[inline]
    fn add(self, rhs: Felt) -> Felt {
        debug_assert_eq!(self.ctx, rhs.ctx);
        // both operands < 2^61, so the sum cannot overflow u64
        let s = self.value + rhs.value;
        let p = self.ctx.p;
        Felt {
            value: if s >= p { s - p } else { s },
            ctx: self.ctx,
        }
    }
}

impl Sub for Felt {
    type Output = Felt;
    #[inline]
    fn sub(self, rhs: Felt) -> Felt {
        debug_assert_eq!(self.ctx, rhs.ctx);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.ctx.p - rhs.value + self.value
        };
        Felt {
            value,
            ctx: self.ctx,
        }
    }
}

impl Mul for Felt {
    type Output = Felt;
    #[inline]
    fn mul(self, rhs: Felt) -> Felt {
        debug_assert_eq!(self.ctx, rhs.ctx);
        Felt {
            value: mul_mod(self.value, rhs.value, self.ctx.p),
            ctx: self.ctx,
        }
    }
}

impl Neg for Felt {
    type Output = Felt;
    #[inline]
    fn neg(self) -> Felt {
        if self.value == 0 {
            self
        } else {
            Felt {
                value: self.ctx.p - self.value,
                ctx: self.ctx,
            }
        }
    }
}

/// Panics on division by zero; use [`Felt::checked_div`] for a fallible form.
impl Div for Felt {
    type Output = Felt;
    fn div(self, rhs: Felt) -> Felt {
        self.checked_div(rhs).expect("division by zero in GF(p)")
    }
}

impl AddAssign for Felt {
    #[inline]
    fn add_assign(&mut self, rhs: Felt) {
        *self = *self + rhs;
    }
}

impl SubAssign for Felt {
    #[inline]
    fn sub_assign(&mut self, rhs: Felt) {
        *self = *self - rhs;
    }
}

impl MulAssign for Felt {
    #[inline]
    fn mul_assign(&mut self, rhs: Felt) {
        *self = *self * rhs;
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(mut n: u64) -> u64 {
    if n <= 2 {
        return 2;
    }
    if n % 2 == 0 {
        n += 1;
    }
    while !is_prime(n) {
        n += 2;
    }
    n
}
