//! `g1-verify`: the joint generation of the full alternating group by the
//! two embeddings of the elementary-group images at one coordinate.

use super::crux_cmd::{shared_context, shared_witness};
use super::Config;
use super::Shared;
use crate::report::{Check, Outcome};
use framecheck_core::crux::CruxParams;
use framecheck_core::frames::{el3_generators_ten, joint_generation_check, JointGenerationReport};
use framecheck_core::group_engine::VerdictKind;
use framecheck_core::trunc_ring::make_generators;
use serde_json::json;
use std::sync::Arc;

type SharedReport = Shared<Result<Arc<JointGenerationReport>, String>>;

pub fn checks(cfg: &Config) -> Vec<Check> {
    let ctx = shared_context(cfg);
    let witness = shared_witness(cfg, &ctx);
    let report: SharedReport = {
        let cfg = cfg.clone();
        let witness = witness.clone();
        Shared::new(move || {
            let w = witness.get().as_ref().map_err(|e| e.clone())?;
            let params = CruxParams::new(cfg.p, cfg.n).map_err(|e| e.to_string())?;
            let ring = make_generators(cfg.p, cfg.n).map_err(|e| e.to_string())?;
            let gens = el3_generators_ten(&ring).map_err(|e| e.to_string())?;
            let factor = cfg.n - framecheck_core::trunc_ring::LOW_COORD;
            joint_generation_check(
                &params,
                w,
                &gens,
                factor,
                &cfg.cache,
                cfg.seed,
                cfg.max_random_tries,
            )
            .map(Arc::new)
            .map_err(|e| e.to_string())
        })
    };

    let mut checks = Vec::new();
    {
        let report = report.clone();
        checks.push(Check::new("g1/joint-generation", move || {
            let expected = json!({
                "verdict": "natural-alternating",
                "inputs": "ten-element set images through both embeddings (20 generators)",
            });
            match report.get() {
                Ok(r) => {
                    let actual = json!({
                        "verdict": format!("{:?}", r.verdict.kind),
                        "prime_cycle_length": r.verdict.prime_cycle.as_ref().map(|(_, q)| *q),
                    });
                    if r.verdict.kind == VerdictKind::NaturalAlternating {
                        Outcome::verified(expected, actual)
                    } else {
                        Outcome::refuted(expected, actual, "joint generation failed".into())
                    }
                }
                Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.clone()),
            }
        }));
    }
    {
        let report = report.clone();
        checks.push(Check::new("g1/first-image-negative-control", move || {
            let expected = json!({
                "order": "projective image of SL_{3n}(F_p), a proper subgroup of Alt(u)",
            });
            match report.get() {
                Ok(r) => {
                    let actual = json!({
                        "order": r.first_only_order.to_string(),
                        "expected_order": r.expected_first_only.to_string(),
                    });
                    if r.first_only_order == r.expected_first_only {
                        Outcome::verified(expected, actual)
                    } else {
                        Outcome::refuted(expected, actual, "first-image order unexpected".into())
                    }
                }
                Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.clone()),
            }
        }));
    }
    {
        let report = report.clone();
        checks.push(Check::new("g1/image-parities", move || {
            let expected = json!({ "all_images_even": true });
            match report.get() {
                Ok(r) => {
                    let actual = json!({ "all_images_even": r.all_images_even });
                    if r.all_images_even {
                        Outcome::verified(expected, actual)
                    } else {
                        Outcome::refuted(expected, actual, "an image is odd".into())
                    }
                }
                Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.clone()),
            }
        }));
    }
    checks
}
