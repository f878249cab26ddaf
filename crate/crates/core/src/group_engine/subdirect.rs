//! Fullness of subdirect products of finite simple groups.
//!
//! Generators are tuples of permutations, one component per factor. After
//! checking per-factor surjectivity (chain order against the expected factor
//! order), every pair of factors with equal orders is projected onto the
//! disjoint union of the two point sets and tested for full order. For
//! simple factors of different orders the pair test is vacuous: a subdirect
//! subgroup of a product of two non-isomorphic simple groups is the whole
//! product, so those pairs are skipped.

use super::chain::StabilizerChain;
use super::EngineError;
use crate::perm::Permutation;
use num_bigint::BigUint;
use rayon::prelude::*;

/// One factor of the target product.
#[derive(Debug, Clone)]
pub struct FactorSpec {
    pub degree: usize,
    /// Expected order of the factor group. When absent, the per-factor
    /// chain order is accepted as ground truth.
    pub expected_order: Option<BigUint>,
}

impl FactorSpec {
    pub fn new(degree: usize, expected_order: Option<BigUint>) -> Self {
        FactorSpec {
            degree,
            expected_order,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubdirectVerdict {
    Full,
    /// Two coordinates are diagonally linked; fullness fails there.
    Linked(usize, usize),
}

/// Joins two components of a tuple into one permutation on the disjoint
/// union of their point sets (second factor shifted).
fn pair_projection(tuple: &[Permutation], i: usize, j: usize) -> Permutation {
    let di = tuple[i].degree();
    let dj = tuple[j].degree();
    let mut images = Vec::with_capacity(di + dj);
    images.extend(tuple[i].images().iter().copied());
    images.extend(tuple[j].images().iter().map(|&v| v + di as u32));
    Permutation::from_images(images).expect("disjoint union of bijections")
}

/// Tests whether the tuples generate the full product of the factors.
pub fn subdirect_fullness(
    gens: &[Vec<Permutation>],
    factors: &[FactorSpec],
    seed: u64,
) -> Result<SubdirectVerdict, EngineError> {
    if gens.is_empty() {
        return Err(EngineError::EmptyGenerators);
    }
    let m = factors.len();
    for tuple in gens {
        if tuple.len() != m {
            return Err(EngineError::BadProductElement(format!(
                "tuple has {} components, expected {m}",
                tuple.len()
            )));
        }
        for (k, component) in tuple.iter().enumerate() {
            if component.degree() != factors[k].degree {
                return Err(EngineError::BadProductElement(format!(
                    "component {k} has degree {}, factor expects {}",
                    component.degree(),
                    factors[k].degree
                )));
            }
        }
    }

    // Per-factor surjectivity first.
    let mut factor_orders = Vec::with_capacity(m);
    for k in 0..m {
        let projected: Vec<Permutation> = gens.iter().map(|t| t[k].clone()).collect();
        let chain = match &factors[k].expected_order {
            Some(expected) => {
                let chain =
                    StabilizerChain::build_with_order_bound(&projected, seed ^ k as u64, expected)?;
                if chain.order() != expected {
                    return Err(EngineError::FactorSurjectivity {
                        factor: k,
                        got: chain.order().clone(),
                        expected: expected.clone(),
                    });
                }
                chain
            }
            None => StabilizerChain::build(&projected, seed ^ k as u64)?,
        };
        factor_orders.push(chain.order().clone());
    }

    // Pairwise linkage for factors of equal order.
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if factor_orders[i] == factor_orders[j] {
                pairs.push((i, j));
            }
        }
    }
    let outcomes: Vec<Result<Option<(usize, usize)>, EngineError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let projected: Vec<Permutation> =
                gens.iter().map(|t| pair_projection(t, i, j)).collect();
            let full_order = &factor_orders[i] * &factor_orders[j];
            let chain = StabilizerChain::build_with_order_bound(
                &projected,
                seed ^ ((i * 7919 + j) as u64),
                &full_order,
            )?;
            Ok(if chain.order() == &full_order {
                None
            } else {
                Some((i, j))
            })
        })
        .collect();
    let mut linked = None;
    for outcome in outcomes {
        if let Some(pair) = outcome? {
            linked = Some(linked.map_or(pair, |prev: (usize, usize)| prev.min(pair)));
        }
    }
    Ok(match linked {
        Some((i, j)) => SubdirectVerdict::Linked(i, j),
        None => SubdirectVerdict::Full,
    })
}
