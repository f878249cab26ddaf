//! `g0-verify`: per-factor surjectivity of the elementary-group generator
//! sets, the cogenerator search, and the embedded SL_3 copy.

use super::{big, Config};
use crate::report::{Check, Outcome};
use framecheck_core::crux::{embedded_sl3_check, CruxParams};
use framecheck_core::frames::{
    el3_generators_five, el3_generators_ten, find_sl3_cogenerator, FrameError,
};
use framecheck_core::group_engine::StabilizerChain;
use framecheck_core::projective::{psl_image_order, sl_order};
use framecheck_core::trunc_ring::make_generators;
use serde_json::json;

pub fn checks(cfg: &Config) -> Vec<Check> {
    let mut checks = Vec::new();

    {
        let cfg = cfg.clone();
        checks.push(Check::new("g0/ten-generator-order", move || {
            factor_order_outcome(&cfg, cfg.n, GenSet::Ten)
        }));
    }
    {
        let cfg = cfg.clone();
        checks.push(Check::new("g0/five-generator-match", move || {
            factor_order_outcome(&cfg, cfg.n, GenSet::Five)
        }));
    }
    {
        let cfg = cfg.clone();
        checks.push(Check::new("g0/cogenerator", move || {
            let expected = json!({
                "property": "SL_3(F_p) = <I + e_{1,3}, g> on projective points",
                "budget": cfg.max_random_tries,
            });
            match find_sl3_cogenerator(cfg.p, cfg.seed, cfg.max_random_tries, &cfg.cache) {
                Ok(g) => {
                    let entries: Vec<Vec<u64>> = (0..3)
                        .map(|i| (0..3).map(|j| g.get(i, j).value()).collect())
                        .collect();
                    Outcome::verified(expected, json!({ "cogenerator": entries }))
                }
                Err(FrameError::CogeneratorBudget(t)) => Outcome::inconclusive(
                    expected,
                    serde_json::Value::Null,
                    format!("no cogenerator within {t} tries"),
                ),
                Err(e) => Outcome::error(expected, e.to_string()),
            }
        }));
    }
    {
        let cfg = cfg.clone();
        checks.push(Check::new("g0/embedded-sl3", move || {
            let expected = json!({
                "order": sl_order(cfg.p, 3).to_string(),
                "involution": "explicit word in the four generators, and in the chain",
                "support": "off-diagonal entries only at rows/cols {1, 2n+2, 2n+3}",
            });
            let run = || -> Result<Outcome, String> {
                let params = CruxParams::new(cfg.p, cfg.n).map_err(|e| e.to_string())?;
                let idx = cfg
                    .cache
                    .get(cfg.p, params.dimension())
                    .map_err(|e| e.to_string())?;
                let report =
                    embedded_sl3_check(&params, &idx, cfg.seed).map_err(|e| e.to_string())?;
                let ok = report.chain_order == report.expected_order
                    && report.involution_word_matches
                    && report.involution_in_chain
                    && report.support_pattern_ok;
                let actual = json!({
                    "chain_order": report.chain_order.to_string(),
                    "involution_word_matches": report.involution_word_matches,
                    "involution_in_chain": report.involution_in_chain,
                    "support_pattern_ok": report.support_pattern_ok,
                });
                Ok(if ok {
                    Outcome::verified(expected.clone(), actual)
                } else {
                    Outcome::refuted(
                        expected.clone(),
                        actual,
                        "embedded copy check failed".into(),
                    )
                })
            };
            run().unwrap_or_else(|e| Outcome::error(serde_json::Value::Null, e))
        }));
    }

    if cfg.slow {
        let cfg = cfg.clone();
        checks.push(Check::new("g0/ten-five-match-n4", move || {
            let ten = factor_order_outcome(&cfg, 4, GenSet::Ten);
            let five = factor_order_outcome(&cfg, 4, GenSet::Five);
            if ten.status == crate::report::Status::Verified
                && five.status == crate::report::Status::Verified
            {
                Outcome::verified(
                    json!({ "coordinate": 4, "sets": ["ten", "five"] }),
                    json!({ "ten": ten.actual, "five": five.actual }),
                )
            } else {
                Outcome::refuted(
                    json!({ "coordinate": 4 }),
                    json!({ "ten": ten.actual, "five": five.actual }),
                    "generator sets disagree at coordinate 4".into(),
                )
            }
        }));
    }

    checks
}

enum GenSet {
    Ten,
    Five,
}

fn factor_order_outcome(cfg: &Config, n: usize, which: GenSet) -> Outcome {
    let expected_order = psl_image_order(cfg.p, 3 * n);
    let expected = json!({
        "coordinate": n,
        "order": expected_order.to_string(),
        "role": "finite-level evidence",
        "note": "order of the projective image of SL_{3n}(F_p)",
    });
    let run = || -> Result<Outcome, FrameError> {
        let ring = make_generators(cfg.p, n)?;
        let gens = match which {
            GenSet::Ten => el3_generators_ten(&ring)?,
            GenSet::Five => {
                let g = find_sl3_cogenerator(cfg.p, cfg.seed, cfg.max_random_tries, &cfg.cache)?;
                el3_generators_five(&ring, &g)?
            }
        };
        let factor = n - framecheck_core::trunc_ring::LOW_COORD;
        let perms = gens.factor_perms(factor, &cfg.cache)?;
        let chain = StabilizerChain::build_with_order_bound(&perms, cfg.seed, &expected_order)?;
        let actual = json!({
            "order": chain.order().to_string(),
            "generators": gens.len(),
        });
        Ok(if chain.order() == &expected_order {
            Outcome::verified(expected.clone(), actual)
        } else {
            Outcome::refuted(
                expected.clone(),
                actual,
                "per-factor image is a proper subgroup".into(),
            )
        })
    };
    run()
        .unwrap_or_else(|e| Outcome::error(json!({ "order": big(&expected_order) }), e.to_string()))
}
