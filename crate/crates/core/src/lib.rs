//! Exact tools for arithmetic read-once polynomials over prime fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`ff`]: GF(p) arithmetic.
//! * [`mpoly`]: sparse multivariate polynomials, restrictions, derivatives,
//!   randomized identity testing and trivariate interpolation.
//! * [`rof`]: read-once formulae, random instance generation and black-box
//!   oracles.
//! * [`decomp`]: commutators, the two-copy `B` mapping, gate graphs, the
//!   trivariate read-once criterion and a brute-force read-once decider.
//! * [`charax`]: certification of good assignments and the global decision
//!   from trivariate restrictions.
//! * [`testers`]: the black-box read-once tester and property tester.
//! * [`hardcases`]: the `Q_n` family, locality sweeps and Boolean
//!   counterexamples.

pub mod charax;
pub mod decomp;
pub mod error;
pub mod ff;
pub mod hardcases;
pub mod mpoly;
pub mod rof;
pub mod testers;

pub use error::{Error, Result};
pub use ff::{Felt, FieldCtx};
pub use mpoly::{Assignment, MPoly, Monomial};
