//! `glue-demo`: gluing overlapping alternating windows, extending a linear
//! group to its affine semidirect product, and congruence splits.

use super::Config;
use crate::report::{Check, Outcome};
use framecheck_core::fpalg::{ElementaryForm, FpMatrix};
use framecheck_core::frames::{
    alt_window_generators, congruence_kernel_split, el3_generators_ten, extend, glue,
    verify_factor_generation, FactorElement, FactorKind, FrameError, GeneratorSet, ProductElement,
    TruncatedProduct,
};
use framecheck_core::perm::Permutation;
use framecheck_core::projective::sl_order;
use framecheck_core::trunc_ring::make_generators;
use num_bigint::BigUint;
use serde_json::json;
use std::collections::BTreeSet;

/// Permutation of the p^2 vectors of F_p^2 given by right multiplication.
fn linear_perm(p: u64, m: &FpMatrix) -> Permutation {
    let pu = p as usize;
    let images: Vec<u32> = (0..pu * pu)
        .map(|idx| {
            let (x, y) = ((idx % pu) as u64, (idx / pu) as u64);
            let nx = (x * m.get(0, 0).value() + y * m.get(1, 0).value()) % p;
            let ny = (x * m.get(0, 1).value() + y * m.get(1, 1).value()) % p;
            (nx + p * ny) as u32
        })
        .collect();
    Permutation::from_images(images).unwrap()
}

fn translation_perm(p: u64, tx: u64, ty: u64) -> Permutation {
    let pu = p as usize;
    let images: Vec<u32> = (0..pu * pu)
        .map(|idx| {
            let (x, y) = ((idx % pu) as u64, (idx / pu) as u64);
            (((x + tx) % p) + p * ((y + ty) % p)) as u32
        })
        .collect();
    Permutation::from_images(images).unwrap()
}

/// The affine example: A = SL_2(F_p) acting linearly on F_p^2, together
/// with one translation generating the full semidirect product of order
/// p^2 * |SL_2(F_p)|.
pub fn affine_example(p: u64) -> (GeneratorSet, ProductElement, BigUint) {
    let degree = (p * p) as usize;
    let order = BigUint::from(p * p) * sl_order(p, 2);
    let product = TruncatedProduct {
        factors: vec![FactorKind::Explicit {
            degree,
            order: order.clone(),
        }],
    };
    let e12 = FpMatrix::elementary_fp(2, 0, 1, 1, p, ElementaryForm::GroupForm).unwrap();
    let e21 = FpMatrix::elementary_fp(2, 1, 0, 1, p, ElementaryForm::GroupForm).unwrap();
    let gens = GeneratorSet::new(
        product,
        vec![
            ProductElement {
                name: "e12".into(),
                components: vec![FactorElement::Perm(linear_perm(p, &e12))],
            },
            ProductElement {
                name: "e21".into(),
                components: vec![FactorElement::Perm(linear_perm(p, &e21))],
            },
        ],
    )
    .unwrap();
    let b = ProductElement {
        name: "t(1,0)".into(),
        components: vec![FactorElement::Perm(translation_perm(p, 1, 0))],
    };
    (gens, b, order)
}

pub fn checks(cfg: &Config) -> Vec<Check> {
    let mut checks = Vec::new();

    {
        let cfg = cfg.clone();
        checks.push(Check::new("glue/alt-windows", move || {
            let expected = json!({
                "windows": [[0, 5], [4, 9]],
                "join": "Alt(9)",
                "order": 181440,
            });
            let run = || -> Result<Outcome, FrameError> {
                let product = TruncatedProduct {
                    factors: vec![FactorKind::Alt { points: 9 }],
                };
                let wrap = |gs: Vec<Permutation>, tag: &str| {
                    GeneratorSet::new(
                        product.clone(),
                        gs.into_iter()
                            .enumerate()
                            .map(|(i, g)| ProductElement {
                                name: format!("{tag}{i}"),
                                components: vec![FactorElement::Perm(g)],
                            })
                            .collect(),
                    )
                };
                let x = wrap(alt_window_generators(9, 0, 5)?, "x")?;
                let y = wrap(alt_window_generators(9, 4, 5)?, "y")?;
                let z = glue(&x, &y)?;
                let reports =
                    verify_factor_generation(&z, &[0], &cfg.cache, cfg.seed, cfg.max_random_tries)?;
                let order = reports[0].order.clone().map(|o| o.to_string());
                Ok(Outcome::verified(
                    expected.clone(),
                    json!({ "order": order }),
                ))
            };
            run().unwrap_or_else(|e| {
                Outcome::refuted(
                    json!({ "join": "Alt(9)" }),
                    serde_json::Value::Null,
                    e.to_string(),
                )
            })
        }));
    }

    {
        let cfg = cfg.clone();
        checks.push(Check::new("glue/extension-semidirect", move || {
            let expected = json!({
                "structure": "F_3^2 : SL_2(F_3)",
                "order": 216,
                "generators": "linear generators plus their commutators with one translation",
            });
            let run = || -> Result<Outcome, FrameError> {
                let (gens, b, order) = affine_example(3);
                let z = extend(&gens, &[b])?;
                let reports =
                    verify_factor_generation(&z, &[0], &cfg.cache, cfg.seed, cfg.max_random_tries)?;
                let got = reports[0].order.clone();
                if got.as_ref() == Some(&order) {
                    Ok(Outcome::verified(
                        expected.clone(),
                        json!({ "order": order.to_string(), "generators": z.len() }),
                    ))
                } else {
                    Ok(Outcome::refuted(
                        expected.clone(),
                        json!({ "order": got.map(|o| o.to_string()) }),
                        "extension did not reach the full semidirect product".into(),
                    ))
                }
            };
            run().unwrap_or_else(|e| {
                Outcome::refuted(
                    json!({ "order": 216 }),
                    serde_json::Value::Null,
                    e.to_string(),
                )
            })
        }));
    }

    {
        let cfg = cfg.clone();
        checks.push(Check::new("glue/extension-two-factors", move || {
            let expected = json!({
                "factors": 2,
                "note": "second factor twisted by relabeling the plane; per-factor checks independent",
                "order": 216,
            });
            let run = || -> Result<Outcome, FrameError> {
                let (gens1, b1, order) = affine_example(3);
                // Twist: conjugate every component by a relabeling of the
                // nine points.
                let twist = Permutation::parse_cycle_string(9, "(0 4 8)(1 5)")?;
                let twist_set = |e: &ProductElement| -> Result<FactorElement, FrameError> {
                    match &e.components[0] {
                        FactorElement::Perm(g) => Ok(FactorElement::Perm(g.conjugate(&twist)?)),
                        _ => unreachable!("affine example is permutation-valued"),
                    }
                };
                let product = TruncatedProduct {
                    factors: vec![
                        FactorKind::Explicit { degree: 9, order: order.clone() },
                        FactorKind::Explicit { degree: 9, order: order.clone() },
                    ],
                };
                let elements = gens1
                    .elements
                    .iter()
                    .map(|e| {
                        Ok(ProductElement {
                            name: e.name.clone(),
                            components: vec![e.components[0].clone(), twist_set(e)?],
                        })
                    })
                    .collect::<Result<Vec<_>, FrameError>>()?;
                let gens = GeneratorSet::new(product, elements)?;
                let b = ProductElement {
                    name: b1.name.clone(),
                    components: vec![b1.components[0].clone(), twist_set(&b1)?],
                };
                let z = extend(&gens, &[b])?;
                let reports = verify_factor_generation(
                    &z,
                    &[0, 1],
                    &cfg.cache,
                    cfg.seed,
                    cfg.max_random_tries,
                )?;
                let orders: Vec<_> =
                    reports.iter().map(|r| r.order.clone().map(|o| o.to_string())).collect();
                Ok(Outcome::verified(expected.clone(), json!({ "orders": orders })))
            };
            run().unwrap_or_else(|e| {
                Outcome::refuted(json!({ "order": 216 }), serde_json::Value::Null, e.to_string())
            })
        }));
    }

    {
        let cfg = cfg.clone();
        checks.push(Check::new("glue/congruence-split", move || {
            let expected = json!({
                "set": "ten-element elementary set over coordinates [3, 4]",
                "v": [0],
                "property": "on-V components equal direct coordinate evaluation; off-V keeps the rest",
            });
            let run = || -> Result<Outcome, FrameError> {
                let ring = make_generators(cfg.p, 4)?;
                let gens = el3_generators_ten(&ring)?;
                let v: BTreeSet<usize> = [0usize].into_iter().collect();
                let (on_v, off_v) = congruence_kernel_split(&gens, &v)?;
                let shapes_ok = on_v.product.factors.len() == 1
                    && off_v.product.factors.len() == 1
                    && on_v.len() == gens.len()
                    && off_v.len() == gens.len();
                // The on-V component of each generator is its factor-0
                // component verbatim.
                let components_match = gens
                    .elements
                    .iter()
                    .zip(&on_v.elements)
                    .all(|(full, proj)| full.components[0] == proj.components[0]);
                if shapes_ok && components_match {
                    Ok(Outcome::verified(
                        expected.clone(),
                        json!({ "on_v_factors": 1, "off_v_factors": 1, "elements": gens.len() }),
                    ))
                } else {
                    Ok(Outcome::refuted(
                        expected.clone(),
                        json!({ "shapes_ok": shapes_ok, "components_match": components_match }),
                        "split disagrees with coordinate evaluation".into(),
                    ))
                }
            };
            run().unwrap_or_else(|e| Outcome::error(serde_json::Value::Null, e.to_string()))
        }));
    }

    checks
}
