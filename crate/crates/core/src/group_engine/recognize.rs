//! Natural Alt/Sym recognition.
//!
//! Small degrees (<= 500) are settled by exact order comparison against
//! u!/2 and u!. Larger degrees use the classical cycle criterion: a
//! transitive, primitive group of degree u containing an element with a
//! cycle of prime length q, u/2 < q < u - 2, contains Alt(u); generator
//! parities then separate Alt from Sym. Inconclusive (witness budget
//! exhausted) is reported distinctly from refuted.

use super::blocks::{is_primitive, BlockSystem};
use super::chain::StabilizerChain;
use super::{check_degrees, factorial, is_transitive, EngineError};
use crate::fpalg::is_prime;
use crate::perm::{Parity, Permutation};
use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Degree threshold below which exact order comparison is used.
pub const EXACT_ORDER_DEGREE: usize = 500;
/// Maximum length of a random word tried in the witness search.
pub const MAX_WORD_LENGTH: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerdictKind {
    NaturalAlternating,
    NaturalSymmetric,
    Other(OtherReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OtherReason {
    /// Refuted: the group is not even transitive.
    Intransitive { orbit_size: usize },
    /// Refuted: a proper block system exists.
    BlocksFound {
        num_blocks: usize,
        block_size: usize,
    },
    /// Refuted: exact order shows a proper subgroup.
    ProperSubgroup { order: BigUint },
    /// Inconclusive: no prime-cycle witness within the word budget.
    WitnessBudgetExhausted { tries: usize },
}

impl OtherReason {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, OtherReason::WitnessBudgetExhausted { .. })
    }
}

/// Recognition outcome plus the evidence backing it.
#[derive(Debug, Clone)]
pub struct RecognitionVerdict {
    pub kind: VerdictKind,
    pub degree: usize,
    /// Orbit of point 0 (the transitivity certificate).
    pub orbit: Vec<u32>,
    /// `Some(Err(system))` when a nontrivial block system was found.
    pub primitivity: Option<Result<(), BlockSystem>>,
    /// Element with a prime cycle and that cycle's length, when one was found.
    pub prime_cycle: Option<(Permutation, usize)>,
    pub generator_parities: Vec<Parity>,
    /// Exact order, when the chain fallback ran.
    pub order: Option<BigUint>,
}

impl RecognitionVerdict {
    pub fn is_natural_alternating(&self) -> bool {
        self.kind == VerdictKind::NaturalAlternating
    }
}

/// Decides whether the generated group is the natural Alt or Sym of its
/// degree. `max_tries` bounds the random-word witness search.
pub fn recognize_alt_sym(
    gens: &[Permutation],
    seed: u64,
    max_tries: usize,
) -> Result<RecognitionVerdict, EngineError> {
    let degree = check_degrees(gens)?;
    let generator_parities: Vec<Parity> = gens.iter().map(|g| g.parity()).collect();
    let all_even = generator_parities.iter().all(|&p| p == Parity::Even);

    let (transitive, orbit) = is_transitive(gens)?;
    if !transitive {
        return Ok(RecognitionVerdict {
            kind: VerdictKind::Other(OtherReason::Intransitive {
                orbit_size: orbit.len(),
            }),
            degree,
            orbit,
            primitivity: None,
            prime_cycle: None,
            generator_parities,
            order: None,
        });
    }

    if degree <= EXACT_ORDER_DEGREE {
        let alt_order = factorial(degree as u64) / 2u32;
        let sym_order = factorial(degree as u64);
        let bound = if all_even {
            alt_order.clone()
        } else {
            sym_order.clone()
        };
        let chain = StabilizerChain::build_with_order_bound(gens, seed, &bound)?;
        let order = chain.order().clone();
        let kind = if order == sym_order {
            VerdictKind::NaturalSymmetric
        } else if order == alt_order && all_even {
            VerdictKind::NaturalAlternating
        } else {
            VerdictKind::Other(OtherReason::ProperSubgroup {
                order: order.clone(),
            })
        };
        return Ok(RecognitionVerdict {
            kind,
            degree,
            orbit,
            primitivity: None,
            prime_cycle: None,
            generator_parities,
            order: Some(order),
        });
    }

    let primitivity = primitivity_with_prefix_shortcut(gens)?;
    if let Err(system) = &primitivity {
        let reason = OtherReason::BlocksFound {
            num_blocks: system.num_blocks,
            block_size: system.block_size(),
        };
        return Ok(RecognitionVerdict {
            kind: VerdictKind::Other(reason),
            degree,
            orbit,
            primitivity: Some(primitivity),
            prime_cycle: None,
            generator_parities,
            order: None,
        });
    }

    let witness = search_prime_cycle(gens, degree, seed, max_tries);
    match witness {
        Some((element, q)) => {
            let kind = if all_even {
                VerdictKind::NaturalAlternating
            } else {
                VerdictKind::NaturalSymmetric
            };
            Ok(RecognitionVerdict {
                kind,
                degree,
                orbit,
                primitivity: Some(primitivity),
                prime_cycle: Some((element, q)),
                generator_parities,
                order: None,
            })
        }
        None => Ok(RecognitionVerdict {
            kind: VerdictKind::Other(OtherReason::WitnessBudgetExhausted { tries: max_tries }),
            degree,
            orbit,
            primitivity: Some(primitivity),
            prime_cycle: None,
            generator_parities,
            order: None,
        }),
    }
}

/// Primitivity of the generated group, preferring the shortest transitive
/// generator prefix: a partition invariant under the full group is
/// invariant under any subgroup, so a primitive transitive subgroup
/// certifies the supergroup. Block systems found on the prefix are only
/// candidate systems, so that path re-checks with the full list.
fn primitivity_with_prefix_shortcut(
    gens: &[Permutation],
) -> Result<Result<(), BlockSystem>, EngineError> {
    let degree = gens[0].degree();
    let prefix_len = (1..gens.len()).find(|&k| super::orbit_of(&gens[..k], 0).len() == degree);
    if let Some(k) = prefix_len {
        if let Ok(()) = is_primitive(&gens[..k])? {
            return Ok(Ok(()));
        }
    }
    is_primitive(gens)
}

/// Random words of length <= MAX_WORD_LENGTH over the generators and their
/// inverses, scanned for a cycle of prime length q with u/2 < q < u - 2.
fn search_prime_cycle(
    gens: &[Permutation],
    degree: usize,
    seed: u64,
    max_tries: usize,
) -> Option<(Permutation, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inverses: Vec<Permutation> = gens.iter().map(|g| g.inverse()).collect();
    for _ in 0..max_tries {
        let len = rng.random_range(1..=MAX_WORD_LENGTH);
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for _ in 0..len {
            let idx = rng.random_range(0..gens.len());
            let use_inverse = rng.random_range(0..2u8) == 1;
            let factor = if use_inverse {
                inverses[idx].images()
            } else {
                gens[idx].images()
            };
            for v in images.iter_mut() {
                *v = factor[*v as usize];
            }
        }
        if let Some(q) = prime_cycle_length(&images, degree) {
            let element = Permutation::from_images(images).expect("word is a bijection");
            return Some((element, q));
        }
    }
    None
}

fn prime_cycle_length(images: &[u32], degree: usize) -> Option<usize> {
    let mut seen = vec![false; degree];
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            len += 1;
            cur = images[cur] as usize;
        }
        if 2 * len > degree && len + 2 < degree && is_prime(len as u64) {
            return Some(len);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, cycles: &str) -> Permutation {
        Permutation::parse_cycle_string(degree, cycles).unwrap()
    }

    fn alt_gens(degree: usize) -> Vec<Permutation> {
        // (0 1 2) plus a long even cycle.
        let long = if degree % 2 == 1 {
            let pts: Vec<u32> = (0..degree as u32).collect();
            Permutation::from_cycles(degree, &[pts]).unwrap()
        } else {
            let pts: Vec<u32> = (1..degree as u32).collect();
            Permutation::from_cycles(degree, &[pts]).unwrap()
        };
        vec![perm(degree, "(0 1 2)"), long]
    }

    #[test]
    fn natural_alt9_via_exact_order() {
        let verdict = recognize_alt_sym(&alt_gens(9), 0, 100).unwrap();
        assert_eq!(verdict.kind, VerdictKind::NaturalAlternating);
        assert_eq!(verdict.order, Some(BigUint::from(181440u32)));
    }

    #[test]
    fn natural_sym9() {
        let gens = [perm(9, "(0 1)"), perm(9, "(0 1 2 3 4 5 6 7 8)")];
        let verdict = recognize_alt_sym(&gens, 0, 100).unwrap();
        assert_eq!(verdict.kind, VerdictKind::NaturalSymmetric);
        assert_eq!(verdict.order, Some(factorial(9)));
    }

    #[test]
    fn never_alternating_with_an_odd_generator() {
        let gens = [perm(6, "(0 1)"), perm(6, "(0 1 2 3 4 5)")];
        let verdict = recognize_alt_sym(&gens, 0, 100).unwrap();
        assert_ne!(verdict.kind, VerdictKind::NaturalAlternating);
        assert!(verdict.generator_parities.contains(&Parity::Odd));
    }

    #[test]
    fn proper_subgroup_is_refuted_not_inconclusive() {
        let gens = [perm(8, "(0 1 2 3 4 5 6)"), perm(8, "(0 7)(1 6)(2 3)(4 5)")];
        let verdict = recognize_alt_sym(&gens, 0, 100).unwrap();
        match verdict.kind {
            VerdictKind::Other(reason) => {
                assert!(!reason.is_inconclusive());
                assert_eq!(
                    reason,
                    OtherReason::ProperSubgroup {
                        order: BigUint::from(168u32)
                    }
                );
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn intransitive_is_refuted() {
        let gens = [perm(9, "(0 1 2)")];
        let verdict = recognize_alt_sym(&gens, 0, 100).unwrap();
        assert!(matches!(
            verdict.kind,
            VerdictKind::Other(OtherReason::Intransitive { orbit_size: 3 })
        ));
    }

    #[test]
    fn jordan_path_on_a_large_degree() {
        // Degree 601 > EXACT_ORDER_DEGREE exercises the primitivity sweep
        // and the prime-cycle witness search.
        let verdict = recognize_alt_sym(&alt_gens(601), 0, 10_000).unwrap();
        assert_eq!(verdict.kind, VerdictKind::NaturalAlternating);
        let (w, q) = verdict.prime_cycle.expect("witness found");
        assert!(is_prime(q as u64));
        assert!(2 * q > 601 && q + 2 < 601);
        assert!(w.cycle_decomposition().iter().any(|c| c.len() == q));
        assert!(matches!(verdict.primitivity, Some(Ok(()))));
    }

    #[test]
    fn witness_budget_exhaustion_is_inconclusive() {
        let verdict = recognize_alt_sym(&alt_gens(601), 0, 0).unwrap();
        match verdict.kind {
            VerdictKind::Other(reason) => assert!(reason.is_inconclusive()),
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn small_degree_alt5_is_recognized() {
        let gens = [perm(5, "(0 1 2)"), perm(5, "(2 3 4)")];
        let verdict = recognize_alt_sym(&gens, 0, 10).unwrap();
        assert_eq!(verdict.kind, VerdictKind::NaturalAlternating);
        assert_eq!(verdict.order, Some(BigUint::from(60u32)));
    }
}
