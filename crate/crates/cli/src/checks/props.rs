//! `props-verify`: twisted multiple embeddings, pigeonhole certificates,
//! overlapping alternating windows, and block plans.

use super::Config;
use crate::report::{Check, Outcome};
use framecheck_core::frames::{
    block_plan, multiple_embeddings, pigeonhole_certificate, two_alt_copies, FrameError,
};
use framecheck_core::group_engine::{
    subdirect_fullness, FactorSpec, SubdirectVerdict, VerdictKind,
};
use framecheck_core::perm::{Parity, Permutation};
use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

fn perm(degree: usize, cycles: &str) -> Permutation {
    Permutation::parse_cycle_string(degree, cycles).unwrap()
}

fn alt5_gens() -> Vec<Permutation> {
    vec![perm(5, "(0 1 2)"), perm(5, "(2 3 4)")]
}

/// Uniform random element of Alt(degree): shuffle, then repair parity.
fn random_even(degree: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for i in (1..degree).rev() {
        let j = rng.random_range(0..=i);
        images.swap(i, j);
    }
    let mut g = Permutation::from_images(images).unwrap();
    if g.parity() == Parity::Odd {
        let swap = Permutation::transposition(degree, 0, 1).unwrap();
        g = g.compose(&swap).unwrap();
    }
    g
}

pub fn checks(cfg: &Config, quick: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    let seed = cfg.seed;

    checks.push(Check::new("props/multiple-embeddings-m2", move || {
        let expected = json!({
            "verdict": "full",
            "factor_order": 60,
            "pair_order": 3600,
        });
        let labels = vec![vec![Permutation::identity(5)], vec![perm(5, "(0 1)")]];
        match multiple_embeddings(&alt5_gens(), 1, &labels, seed) {
            Ok(out) => Outcome::verified(
                expected,
                json!({
                    "verdict": "full",
                    "factor_order": out.factor_order.to_string(),
                    "embeddings": out.embeddings.len(),
                }),
            ),
            Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.to_string()),
        }
    }));

    if !quick {
        checks.push(Check::new("props/multiple-embeddings-m6", move || {
            let expected = json!({ "verdict": "full", "coordinates": 6, "pairwise_checks": 15 });
            let labels: Vec<Vec<Permutation>> = vec![
                vec![Permutation::identity(5)],
                vec![perm(5, "(0 1)")],
                vec![perm(5, "(0 2)")],
                vec![perm(5, "(0 3)")],
                vec![perm(5, "(0 4)")],
                vec![perm(5, "(1 2)")],
            ];
            match multiple_embeddings(&alt5_gens(), 1, &labels, seed) {
                Ok(out) => Outcome::verified(
                    expected,
                    json!({ "verdict": "full", "factor_order": out.factor_order.to_string() }),
                ),
                Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.to_string()),
            }
        }));

        checks.push(Check::new(
            "props/multiple-embeddings-duplicate-label",
            move || {
                let expected = json!({ "error": "duplicate labels rejected up front" });
                let labels = vec![vec![perm(5, "(0 1)")], vec![perm(5, "(0 1)")]];
                match multiple_embeddings(&alt5_gens(), 1, &labels, seed) {
                    Err(FrameError::DuplicateLabels(0, 1)) => {
                        Outcome::verified(expected, json!({ "rejected": [0, 1] }))
                    }
                    Err(e) => Outcome::refuted(
                        expected,
                        json!({ "error": e.to_string() }),
                        "wrong error kind".into(),
                    ),
                    Ok(_) => Outcome::refuted(
                        expected,
                        json!({ "accepted": true }),
                        "duplicate labels were accepted".into(),
                    ),
                }
            },
        ));

        checks.push(Check::new("props/subdirect-linked-control", move || {
            let expected =
                json!({ "verdict": "linked(0, 1)", "reason": "pure diagonal embedding" });
            let gens: Vec<Vec<Permutation>> = alt5_gens()
                .into_iter()
                .map(|g| vec![g.clone(), g])
                .collect();
            let factors = vec![
                FactorSpec::new(5, Some(BigUint::from(60u32))),
                FactorSpec::new(5, Some(BigUint::from(60u32))),
            ];
            match subdirect_fullness(&gens, &factors, seed) {
                Ok(SubdirectVerdict::Linked(0, 1)) => {
                    Outcome::verified(expected, json!({ "verdict": "linked(0, 1)" }))
                }
                Ok(v) => Outcome::refuted(
                    expected,
                    json!({ "verdict": format!("{v:?}") }),
                    "diagonal embedding must be linked".into(),
                ),
                Err(e) => Outcome::error(expected, e.to_string()),
            }
        }));
    }

    checks.push(Check::new("props/pigeonhole-100-trials", move || {
        let expected = json!({
            "m": 61,
            "c": 1,
            "group_order": 60,
            "certificates": "100/100 (pigeonhole: m > |S|^c)",
        });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut found = 0;
        for _ in 0..100 {
            let tuple: Vec<Permutation> = (0..61).map(|_| random_even(5, &mut rng)).collect();
            if pigeonhole_certificate(&[tuple]).is_some() {
                found += 1;
            }
        }
        if found == 100 {
            Outcome::verified(expected, json!({ "certificates": "100/100" }))
        } else {
            Outcome::refuted(
                expected,
                json!({ "certificates": format!("{found}/100") }),
                "pigeonhole certificate missing".into(),
            )
        }
    }));

    checks.push(Check::new("props/pigeonhole-none", move || {
        let expected = json!({ "m": 2, "distinct": true, "certificate": "none" });
        let tuple = vec![vec![perm(5, "(0 1 2)"), perm(5, "(0 2 1)")]];
        match pigeonhole_certificate(&tuple) {
            None => Outcome::verified(expected, json!({ "certificate": "none" })),
            Some(pair) => Outcome::refuted(
                expected,
                json!({ "certificate": format!("{pair:?}") }),
                "distinct coordinates flagged".into(),
            ),
        }
    }));

    if !quick {
        checks.push(Check::new("props/pigeonhole-c2-m3601", move || {
            let expected = json!({
                "m": 3601,
                "c": 2,
                "bound": "m > |S|^c = 3600 guarantees a pair",
            });
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
            let t1: Vec<Permutation> = (0..3601).map(|_| random_even(5, &mut rng)).collect();
            let t2: Vec<Permutation> = (0..3601).map(|_| random_even(5, &mut rng)).collect();
            match pigeonhole_certificate(&[t1, t2]) {
                Some((k, k2)) => Outcome::verified(expected, json!({ "pair": [k, k2] })),
                None => Outcome::refuted(
                    expected,
                    json!({ "certificate": "none" }),
                    "guaranteed pair not found".into(),
                ),
            }
        }));

        {
            let tries = cfg.max_random_tries;
            checks.push(Check::new("props/two-alt-5-9", move || {
                let expected = json!({ "order": 181440, "verdict": "natural-alternating" });
                match two_alt_copies(5, 9, seed, tries) {
                    Ok(r) => Outcome::verified(
                        expected,
                        json!({ "order": r.order.map(|o| o.to_string()) }),
                    ),
                    Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.to_string()),
                }
            }));
        }
        {
            let tries = cfg.max_random_tries;
            checks.push(Check::new("props/two-alt-7-12", move || {
                let expected = json!({ "order": 239500800u64, "verdict": "natural-alternating" });
                match two_alt_copies(7, 12, seed, tries) {
                    Ok(r) => {
                        let ok = r.verdict.kind == VerdictKind::NaturalAlternating;
                        let actual = json!({
                            "verdict": format!("{:?}", r.verdict.kind),
                            "order": r.order.map(|o| o.to_string()),
                        });
                        if ok {
                            Outcome::verified(expected, actual)
                        } else {
                            Outcome::refuted(expected, actual, "join is not Alt(12)".into())
                        }
                    }
                    Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.to_string()),
                }
            }));
        }

        {
            let scenario = cfg.scenario.clone();
            checks.push(Check::new("props/block-plan", move || {
                // Scenario-supplied factor list and oracle when present,
                // otherwise the built-in worked example.
                type PlanInputs = (
                    Vec<u64>,
                    Vec<(u64, u64)>,
                    &'static str,
                    Option<Vec<serde_json::Value>>,
                );
                let (ranks, oracle, source, factor_degrees): PlanInputs = match &scenario {
                    Some(s) if !s.factors.is_empty() && !s.oracle.is_empty() => {
                        let mut ranks = Vec::with_capacity(s.factors.len());
                        for (i, f) in s.factors.iter().enumerate() {
                            match f.l_value() {
                                Some(l) => ranks.push(l),
                                None => {
                                    return Outcome::error(
                                        json!({ "source": "scenario" }),
                                        format!("factor {i} carries no rank metadata"),
                                    )
                                }
                            }
                        }
                        let degrees = s
                            .factors
                            .iter()
                            .map(|f| {
                                json!({
                                    "degree": f.degree(),
                                    "order": f.order().map(|o| o.to_string()),
                                })
                            })
                            .collect();
                        (ranks, s.oracle.clone(), "scenario", Some(degrees))
                    }
                    _ => (
                        vec![1, 1, 5, 5, 9, 9],
                        vec![(9841, 5), (265720, 9)],
                        "built-in",
                        None,
                    ),
                };
                let expected = json!({
                    "source": source,
                    "factor_degrees": factor_degrees,
                    "invariants": "h strictly increasing; blocks partition the range",
                });
                match block_plan(&ranks, &oracle) {
                    Ok(plan) => {
                        let increasing = plan.h.windows(2).all(|w| w[0] < w[1]);
                        let mut covered: Vec<usize> = Vec::new();
                        for &(a, b) in &plan.blocks {
                            covered.extend(a..b);
                        }
                        let partitions = covered == (1..=ranks.len()).collect::<Vec<_>>();
                        let actual = json!({
                            "h": plan.h,
                            "blocks": plan.blocks,
                            "block_degrees": plan.block_degrees,
                        });
                        if increasing && partitions {
                            Outcome::verified(expected, actual)
                        } else {
                            Outcome::refuted(expected, actual, "plan invariants violated".into())
                        }
                    }
                    Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.to_string()),
                }
            }));
        }
    }

    checks
}
