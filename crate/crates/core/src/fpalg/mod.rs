//! Exact arithmetic over prime fields `F_p`, cyclic group algebras
//! `F_p[t]/(t^N - 1)`, and dense square matrices over either.
//!
//! Everything here is immutable after construction and reduces eagerly, so
//! values compare by plain equality and can be shared across threads.

mod cyclic;
mod matrix;
mod scalar;

pub use cyclic::CycAlgElement;
pub use matrix::{group_commutator, ring_commutator, ElementaryForm, FpMatrix, Matrix};
pub use scalar::FpScalar;

use thiserror::Error;

/// Errors raised by the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("coefficient ring mismatch")]
    RingMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix is not invertible")]
    Singular,
    #[error("invalid argument: {0}")]
    BadArgument(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

/// Minimal commutative-ring interface used by the generic matrix type.
///
/// `zero`/`one` are methods rather than associated functions because every
/// element carries its own modulus data (`p`, and `N` for group algebras).
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero(&self) -> Self;
    fn one(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, if the element is a unit.
    fn inverse(&self) -> Option<Self>;
    /// True when both elements live in the same ring instance.
    fn same_ring(&self, rhs: &Self) -> bool;
}

/// Deterministic primality test by trial division; inputs stay far below
/// the range where this would matter.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
