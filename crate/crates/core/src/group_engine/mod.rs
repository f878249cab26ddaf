//! Generated-subgroup analysis: stabilizer chains (exact order and
//! membership), transitivity, primitivity, natural Alt/Sym recognition and
//! subdirect-product fullness over tuples of permutations.

mod blocks;
mod chain;
mod recognize;
mod subdirect;

pub use blocks::{find_blocks, is_primitive, minimal_blocks, BlockSystem, BlockVerdict};
pub use chain::{ChainVerification, StabilizerChain};
pub use recognize::{recognize_alt_sym, OtherReason, RecognitionVerdict, VerdictKind};
pub use subdirect::{subdirect_fullness, FactorSpec, SubdirectVerdict};

use crate::perm::Permutation;
use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("generators have mixed degrees: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("computed order {computed} exceeds the claimed bound {bound}")]
    OrderBoundExceeded { computed: BigUint, bound: BigUint },
    #[error("group is not transitive (orbit of 0 has size {orbit_size})")]
    Intransitive { orbit_size: usize },
    #[error("projection onto factor {factor} has order {got}, expected {expected}")]
    FactorSurjectivity {
        factor: usize,
        got: BigUint,
        expected: BigUint,
    },
    #[error("malformed product element: {0}")]
    BadProductElement(String),
}

pub(crate) fn check_degrees(gens: &[Permutation]) -> Result<usize, EngineError> {
    let first = gens.first().ok_or(EngineError::EmptyGenerators)?;
    let degree = first.degree();
    for g in gens {
        if g.degree() != degree {
            return Err(EngineError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    Ok(degree)
}

/// Orbit of `point` under the generated group, in BFS order.
pub fn orbit_of(gens: &[Permutation], point: usize) -> Vec<u32> {
    let degree = gens.first().map_or(0, |g| g.degree());
    let mut seen = vec![false; degree];
    let mut orbit = vec![point as u32];
    seen[point] = true;
    let mut head = 0;
    while head < orbit.len() {
        let x = orbit[head] as usize;
        head += 1;
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y as u32);
            }
        }
    }
    orbit
}

/// Whether the generated group is transitive, together with the orbit of 0.
pub fn is_transitive(gens: &[Permutation]) -> Result<(bool, Vec<u32>), EngineError> {
    let degree = check_degrees(gens)?;
    let orbit = orbit_of(gens, 0);
    Ok((orbit.len() == degree, orbit))
}

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}
