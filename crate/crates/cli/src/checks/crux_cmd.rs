//! `crux-verify`: census, cube labeling, relabeling permutation, inversion
//! relations, and the joint-generation witness.

use super::{Config, Shared};
use crate::report::{Check, Outcome};
use framecheck_core::crux::{
    build_labeling, build_witness, census, make_sigma, verify_relations, Census, CruxError,
    CruxParams, CruxWitness,
};
use framecheck_core::group_engine::VerdictKind;
use framecheck_core::perm::{Parity, Permutation};
use framecheck_core::projective::ProjectiveIndex;
use serde_json::json;
use std::sync::Arc;

pub struct CruxShared {
    pub params: CruxParams,
    pub idx: Arc<ProjectiveIndex>,
    pub v_prime: Permutation,
    pub q_prime: Permutation,
}

pub type SharedCtx = Shared<Result<CruxShared, String>>;
pub type SharedWitness = Shared<Result<Arc<CruxWitness>, String>>;

pub fn shared_context(cfg: &Config) -> SharedCtx {
    let p = cfg.p;
    let n = cfg.n;
    let cache = Arc::clone(&cfg.cache);
    Shared::new(move || {
        let params = CruxParams::new(p, n).map_err(|e| e.to_string())?;
        let idx = cache
            .get(p, params.dimension())
            .map_err(|e| e.to_string())?;
        let v_prime = idx
            .act(&params.transvection_matrix().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let q_prime = idx
            .act(&params.involution_matrix().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        Ok(CruxShared {
            params,
            idx,
            v_prime,
            q_prime,
        })
    })
}

pub fn shared_witness(cfg: &Config, ctx: &SharedCtx) -> SharedWitness {
    let ctx = ctx.clone();
    let seed = cfg.seed;
    let max_tries = cfg.max_random_tries;
    Shared::new(move || {
        let shared = ctx.get().as_ref().map_err(|e| e.clone())?;
        build_witness(&shared.params, &shared.idx, seed, max_tries)
            .map(Arc::new)
            .map_err(|e| e.to_string())
    })
}

fn census_expected(params: &CruxParams) -> serde_json::Value {
    let f = Census::from_formulas(params);
    json!({
        "points": f.points,
        "involution_fixed": f.involution_fixed,
        "transvection_fixed": f.transvection_fixed,
        "transvection_cycles": f.transvection_cycles,
        "fixed_cycles": f.fixed_cycles,
        "swapped_cycle_pairs": f.swapped_cycle_pairs,
        "common_fixed": f.common_fixed,
    })
}

fn census_outcome(params: &CruxParams, v: &Permutation, q: &Permutation) -> Outcome {
    let expected = census_expected(params);
    match census(params, v, q) {
        Ok(c) => Outcome::verified(expected, serde_json::to_value(c).unwrap()),
        Err(e @ CruxError::CensusMismatch { .. }) | Err(e @ CruxError::LabelingFailure(..)) => {
            Outcome::refuted(expected, serde_json::Value::Null, e.to_string())
        }
        Err(e) => Outcome::error(expected, e.to_string()),
    }
}

pub fn checks(cfg: &Config) -> Vec<Check> {
    let ctx = shared_context(cfg);
    let witness = shared_witness(cfg, &ctx);
    let mut checks = Vec::new();

    {
        let ctx = ctx.clone();
        checks.push(Check::new("crux/census", move || {
            let shared = match ctx.get() {
                Ok(s) => s,
                Err(e) => return Outcome::error(serde_json::Value::Null, e.clone()),
            };
            census_outcome(&shared.params, &shared.v_prime, &shared.q_prime)
        }));
    }

    {
        let ctx = ctx.clone();
        checks.push(Check::new("crux/labeling", move || {
            let shared = match ctx.get() {
                Ok(s) => s,
                Err(e) => return Outcome::error(serde_json::Value::Null, e.clone()),
            };
            let f = Census::from_formulas(&shared.params);
            let expected = json!({
                "cubes": f.fixed_cycles,
                "moved_points": 3 * f.transvection_cycles,
                "invariants": "transvection shifts j; involution negates (k, m); verified at every moved point",
            });
            match build_labeling(&shared.params, &shared.v_prime, &shared.q_prime) {
                Ok(l) => Outcome::verified(
                    expected,
                    json!({ "cubes": l.cube_count(), "moved_points": l.moved_points() }),
                ),
                Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.to_string()),
            }
        }));
    }

    {
        let ctx = ctx.clone();
        checks.push(Check::new("crux/sigma", move || {
            let shared = match ctx.get() {
                Ok(s) => s,
                Err(e) => return Outcome::error(serde_json::Value::Null, e.clone()),
            };
            let expected = json!({
                "order": 3,
                "parity": "even",
                "off_moved_set": "identity",
            });
            let labeling = match build_labeling(&shared.params, &shared.v_prime, &shared.q_prime) {
                Ok(l) => l,
                Err(e) => return Outcome::error(expected, e.to_string()),
            };
            let sigma = make_sigma(&labeling);
            let cube = sigma
                .compose(&sigma)
                .and_then(|s2| s2.compose(&sigma))
                .unwrap();
            let order_ok = cube.is_identity() && !sigma.is_identity();
            let parity_ok = sigma.parity() == Parity::Even;
            let off_ok = (0..shared.v_prime.degree())
                .all(|pt| shared.v_prime.apply(pt) != pt || sigma.apply(pt) == pt);
            if order_ok && parity_ok && off_ok {
                Outcome::verified(
                    expected,
                    json!({ "order": 3, "parity": "even", "off_moved_set": "identity" }),
                )
            } else {
                Outcome::refuted(
                    expected,
                    json!({ "order_ok": order_ok, "parity_ok": parity_ok, "off_ok": off_ok }),
                    "relabeling permutation malformed".into(),
                )
            }
        }));
    }

    {
        let ctx = ctx.clone();
        checks.push(Check::new("crux/relations", move || {
            let shared = match ctx.get() {
                Ok(s) => s,
                Err(e) => return Outcome::error(serde_json::Value::Null, e.clone()),
            };
            let expected = json!({
                "relations": [
                    "q''^-1 v' q'' = v'^-1",
                    "q'^-1 v'' q' = v''^-1",
                ],
                "scope": format!("all {} points", shared.params.points()),
                "negative_control": "sigma = identity must fail",
            });
            let labeling = match build_labeling(&shared.params, &shared.v_prime, &shared.q_prime) {
                Ok(l) => l,
                Err(e) => return Outcome::error(expected, e.to_string()),
            };
            let sigma = make_sigma(&labeling);
            let check = match verify_relations(&shared.v_prime, &shared.q_prime, &sigma) {
                Ok(c) => c,
                Err(e) => return Outcome::error(expected, e.to_string()),
            };
            if !check.ok {
                return Outcome::refuted(
                    expected,
                    serde_json::to_value(&check).unwrap(),
                    "inversion relation failed".into(),
                );
            }
            let id = Permutation::identity(shared.v_prime.degree());
            let control = match verify_relations(&shared.v_prime, &shared.q_prime, &id) {
                Ok(c) => c,
                Err(e) => return Outcome::error(expected, e.to_string()),
            };
            if control.ok {
                return Outcome::refuted(
                    expected,
                    json!({ "negative_control": "passed unexpectedly" }),
                    "identity relabeling should not satisfy the relations".into(),
                );
            }
            Outcome::verified(
                expected,
                json!({ "relations": "verified", "negative_control": "fails as required" }),
            )
        }));
    }

    {
        let witness = witness.clone();
        checks.push(Check::new("crux/witness", move || {
            let expected = json!({
                "verdict": "natural-alternating",
                "kernel": "injective when gcd(3n, p-1) = 1",
                "images": "all even",
            });
            let w = match witness.get() {
                Ok(w) => w,
                Err(e) => return Outcome::refuted(expected, serde_json::Value::Null, e.clone()),
            };
            let verdict_ok = w.verdict.kind == VerdictKind::NaturalAlternating;
            let even = w.all_images_even();
            let actual = json!({
                "verdict": format!("{:?}", w.verdict.kind),
                "used_fallback": w.used_fallback(),
                "kernel_scalars": w.kernel.kernel_scalars,
                "kernel_injective": w.kernel.injective,
                "all_images_even": even,
                "transitive": w.verdict.orbit.len() == w.verdict.degree,
                "primitive": matches!(w.verdict.primitivity, Some(Ok(()))),
                "prime_cycle_length": w.verdict.prime_cycle.as_ref().map(|(_, q)| *q),
                "v_second_action": w.v_second_action,
                "q_second_action": w.q_second_action,
            });
            if verdict_ok && even {
                Outcome::verified(expected, actual)
            } else {
                Outcome::refuted(expected, actual, "witness failed".into())
            }
        }));
    }

    if cfg.slow {
        for (p, n) in [(5u64, 3usize), (3, 4)] {
            let cache = Arc::clone(&cfg.cache);
            let id = format!("crux/census-p{p}-n{n}");
            checks.push(Check::new(&id, move || {
                let run = || -> Result<Outcome, CruxError> {
                    let params = CruxParams::new(p, n)?;
                    let idx = cache.get(p, params.dimension()).map_err(CruxError::Proj)?;
                    let v = idx.act(&params.transvection_matrix()?)?;
                    let q = idx.act(&params.involution_matrix()?)?;
                    let outcome = census_outcome(&params, &v, &q);
                    if outcome.status != crate::report::Status::Verified {
                        return Ok(outcome);
                    }
                    // The labeling and the inversion relations come along
                    // at no real cost; the generation check stays at the
                    // default parameters.
                    let labeling = build_labeling(&params, &v, &q)?;
                    let sigma = make_sigma(&labeling);
                    let relations = verify_relations(&v, &q, &sigma)?;
                    if !relations.ok {
                        return Ok(Outcome::refuted(
                            outcome.expected,
                            serde_json::to_value(&relations).unwrap(),
                            "inversion relation failed".into(),
                        ));
                    }
                    let mut actual = outcome.actual;
                    actual["cubes"] = json!(labeling.cube_count());
                    actual["relations"] = json!("verified");
                    Ok(Outcome::verified(outcome.expected, actual))
                };
                match run() {
                    Ok(outcome) => outcome,
                    Err(e) => Outcome::error(serde_json::Value::Null, e.to_string()),
                }
            }));
        }
    }

    checks
}
