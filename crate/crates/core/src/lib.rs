//! Exact computational group theory at desk scale.
//!
//! The crate builds, over finite truncations, a family of interlocking
//! objects: a ring of matrix sequences generated by a cyclic shift and two
//! constant elementary matrices, the elementary group `EL_3` over that ring,
//! projective permutation actions of `SL_{3n}(F_p)`, and glue/extend style
//! constructions over products of finite groups. Every quantitative claim
//! about them (fixed-point counts, cycle censuses, generated orders, closure
//! dimensions) is checked mechanically with exact arithmetic.
//!
//! Module map:
//! * [`fpalg`] - prime fields, cyclic group algebras, dense matrices.
//! * [`perm`] - permutations with cycle tooling.
//! * [`group_engine`] - stabilizer chains, recognition, subdirect checks.
//! * [`projective`] - projective point enumeration and matrix actions.
//! * [`trunc_ring`] - the truncated matrix-sequence ring and its closure.
//! * [`crux`] - the paired projective embeddings and their census.
//! * [`frames`] - generator-set combination and product-level checks.
//!
//! The smallest interesting instance, end to end:
//!
//! ```
//! use framecheck_core::crux::{census, CruxParams};
//! use framecheck_core::projective::ProjectiveIndex;
//!
//! let params = CruxParams::new(3, 3)?;
//! let points = ProjectiveIndex::enumerate(3, params.dimension())?;
//! let involution = points.act(&params.involution_matrix()?)?;
//! let transvection = points.act(&params.transvection_matrix()?)?;
//!
//! // Brute-force counts, certified against their closed formulas.
//! let counts = census(&params, &transvection, &involution)?;
//! assert_eq!(counts.points, 9841);
//! assert_eq!(counts.involution_fixed, 1097);
//! assert_eq!(counts.transvection_cycles, 3159);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod crux;
pub mod fpalg;
pub mod frames;
pub mod group_engine;
pub mod perm;
pub mod projective;
pub mod trunc_ring;

pub use crux::{CruxParams, CruxWitness};
pub use fpalg::{AlgError, CycAlgElement, FpMatrix, FpScalar};
pub use group_engine::{RecognitionVerdict, StabilizerChain};
pub use perm::Permutation;
pub use projective::ProjectiveIndex;
