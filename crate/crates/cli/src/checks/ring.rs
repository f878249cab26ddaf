//! `ring-verify`: the truncated matrix-sequence ring.

use super::{Config, Shared};
use crate::report::{Check, Outcome};
use framecheck_core::fpalg::Ring;
use framecheck_core::trunc_ring::{
    closure_basis, comm_support, derived_corners, full_dimension, isolate_factor, make_generators,
    project_group_algebra, vanishing_check, IsolationRoute, RingError, SubalgebraBasis,
    TruncGenerators,
};
use framecheck_core::CycAlgElement;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type SharedGens = Shared<Result<TruncGenerators, String>>;

fn shared_gens(p: u64, hi: usize) -> SharedGens {
    Shared::new(move || make_generators(p, hi).map_err(|e| e.to_string()))
}

pub fn checks(cfg: &Config) -> Vec<Check> {
    let p = cfg.p;
    let trunc = cfg.trunc;
    let support_trunc = cfg.support_trunc;
    let wide = shared_gens(p, support_trunc);
    let mut checks = Vec::new();

    {
        let wide = wide.clone();
        checks.push(Check::new("ring/comm-support-sweep", move || {
            let expected = json!({
                "rule": "support of [e12, s^-k e12 s^k] = {n : n | k-1 or n | k+1}",
                "k_max": 50,
                "trunc": support_trunc,
            });
            let gens = match wide.get() {
                Ok(g) => g,
                Err(e) => return Outcome::error(expected, e.clone()),
            };
            for k in 1..=50u64 {
                if let Err(e) = comm_support(gens, k) {
                    return Outcome::refuted(expected, json!({ "k": k }), e.to_string());
                }
            }
            Outcome::verified(expected, json!({ "matched": "50/50" }))
        }));
    }

    checks.push(Check::new("ring/closure-dim-10", move || {
        closure_check(p, 10)
    }));

    {
        let id = format!("ring/closure-dim-{trunc}");
        checks.push(Check::new(&id, move || closure_check(p, trunc)));
    }

    checks.push(Check::new("ring/closure-order-independence", move || {
        let expected = json!({ "dimension": full_dimension(10), "shuffles": 3 });
        let baseline = match closure_basis(p, 10, None) {
            Ok(b) => b.dimension(),
            Err(e) => return Outcome::error(expected, e.to_string()),
        };
        for seed in [1u64, 2, 3] {
            match closure_basis(p, 10, Some(seed)) {
                Ok(b) if b.dimension() == baseline => {}
                Ok(b) => {
                    return Outcome::refuted(
                        expected,
                        json!({ "seed": seed, "dimension": b.dimension() }),
                        "dimension depends on generator order".into(),
                    )
                }
                Err(e) => return Outcome::error(expected, e.to_string()),
            }
        }
        Outcome::verified(expected, json!({ "dimension": baseline }))
    }));

    {
        let wide = wide.clone();
        checks.push(Check::new("ring/corner-identities", move || {
            let expected = json!({
                "e13": "[e12, s^-1 e12 s] = (e_{1,3})_n at every coordinate",
                "e31": "[s^-1 e21 s, e21] = (e_{3,1})_n at every coordinate",
                "trunc": support_trunc,
            });
            let gens = match wide.get() {
                Ok(g) => g,
                Err(e) => return Outcome::error(expected, e.clone()),
            };
            match derived_corners(gens) {
                Ok(_) => Outcome::verified(expected, json!({ "coordinates": "all" })),
                Err(e) => Outcome::refuted(expected, serde_json::Value::Null, e.to_string()),
            }
        }));
    }

    {
        let wide = wide.clone();
        checks.push(Check::new("ring/constant-recovery", move || {
            let expected = json!({
                "e12": "[e13, s^-1 e21 s]",
                "e21": "[s^-1 e12 s, e31]",
            });
            let gens = match wide.get() {
                Ok(g) => g,
                Err(e) => return Outcome::error(expected, e.clone()),
            };
            let out = (|| -> Result<bool, RingError> {
                let corners = derived_corners(gens)?;
                let conj_e21 = gens.shift_inv.mul(&gens.e21)?.mul(&gens.shift)?;
                let rec12 = corners.e13.commutator(&conj_e21)?;
                let conj_e12 = gens.shift_inv.mul(&gens.e12)?.mul(&gens.shift)?;
                let rec21 = conj_e12.commutator(&corners.e31)?;
                Ok(rec12 == gens.e12 && rec21 == gens.e21)
            })();
            match out {
                Ok(true) => Outcome::verified(expected, json!({ "recovered": true })),
                Ok(false) => Outcome::refuted(
                    expected,
                    json!({ "recovered": false }),
                    "bracket relations do not recover the constants".into(),
                ),
                Err(e) => Outcome::error(expected, e.to_string()),
            }
        }));
    }

    checks.push(Check::new("ring/vanishing", move || {
        let expected = json!({
            "statement": "coordinates above n_rel + 2 of [e12, s^-(n_rel+1) e12 s^(n_rel+1)] vanish",
            "role": "finite-level evidence",
            "n_rel": 7,
            "trunc": support_trunc,
        });
        match vanishing_check(p, 7, support_trunc) {
            Ok(true) => Outcome::verified(expected, json!({ "vanishes": true })),
            Ok(false) => Outcome::refuted(
                expected,
                json!({ "vanishes": false }),
                "nonzero coordinate above the bound".into(),
            ),
            Err(e) => Outcome::error(expected, e.to_string()),
        }
    }));

    {
        let seed = cfg.seed;
        checks.push(Check::new("ring/group-algebra-projection", move || {
            projection_check(p, seed)
        }));
    }

    {
        let seed_trunc = trunc;
        checks.push(Check::new("ring/isolate-factors", move || {
            isolation_check(p, seed_trunc)
        }));
    }

    checks
}

fn closure_check(p: u64, hi: usize) -> Outcome {
    let expected =
        json!({ "dimension": full_dimension(hi), "formula": "sum of n^2 for n in [3, N]" });
    match closure_basis(p, hi, None) {
        Ok(basis) => Outcome::verified(expected, json!({ "dimension": basis.dimension() })),
        Err(RingError::ClosureShortfall {
            achieved,
            expected: want,
        }) => Outcome::refuted(
            expected,
            json!({ "dimension": achieved }),
            format!("closure stalled at {achieved} of {want}"),
        ),
        Err(e) => Outcome::error(expected, e.to_string()),
    }
}

fn projection_check(p: u64, seed: u64) -> Outcome {
    let expected = json!({
        "shift": "t",
        "shift_inv": "t^-1",
        "e12": "0",
        "e21": "0",
        "corners": "0",
        "homomorphism_samples": 200,
    });
    let run = || -> Result<Outcome, RingError> {
        let gens = make_generators(p, 6)?;
        let n_cyc = 5usize;
        let t = CycAlgElement::monomial(p, n_cyc, 1)?;
        let t_inv = CycAlgElement::monomial(p, n_cyc, -1)?;
        if project_group_algebra(&gens.shift, n_cyc)? != t
            || project_group_algebra(&gens.shift_inv, n_cyc)? != t_inv
            || !project_group_algebra(&gens.e12, n_cyc)?.is_zero()
            || !project_group_algebra(&gens.e21, n_cyc)?.is_zero()
        {
            return Ok(Outcome::refuted(
                expected.clone(),
                json!("generator images"),
                "generator projection values differ".into(),
            ));
        }
        let corners = derived_corners(&gens)?;
        if !project_group_algebra(&corners.e13, n_cyc)?.is_zero()
            || !project_group_algebra(&corners.e31, n_cyc)?.is_zero()
        {
            return Ok(Outcome::refuted(
                expected.clone(),
                json!("corner images"),
                "corner elements must map to zero".into(),
            ));
        }
        // s^3 + 1 at N_cyc = 3 collapses to the constant 2.
        let word = gens.shift.pow(3)?.add(&gens.one)?;
        if project_group_algebra(&word, 3)? != CycAlgElement::from_coeffs(p, vec![2, 0, 0])? {
            return Ok(Outcome::refuted(
                expected.clone(),
                json!("s^3 + 1 at N=3"),
                "cube word did not collapse to 2".into(),
            ));
        }
        // Multiplicativity on random words.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let atoms = [
            &gens.one,
            &gens.shift,
            &gens.shift_inv,
            &gens.e12,
            &gens.e21,
        ];
        let random_word = |rng: &mut ChaCha8Rng| -> Result<_, RingError> {
            let mut w = atoms[rng.random_range(0..atoms.len())].clone();
            for _ in 0..rng.random_range(1..5usize) {
                let a = atoms[rng.random_range(0..atoms.len())];
                w = if rng.random_range(0..2) == 0 {
                    w.mul(a)?
                } else {
                    w.add(a)?
                };
            }
            Ok(w)
        };
        for _ in 0..200 {
            let w1 = random_word(&mut rng)?;
            let w2 = random_word(&mut rng)?;
            let lhs = project_group_algebra(&w1.mul(&w2)?, n_cyc)?;
            let rhs = project_group_algebra(&w1, n_cyc)?.mul(&project_group_algebra(&w2, n_cyc)?);
            if lhs != rhs {
                return Ok(Outcome::refuted(
                    expected.clone(),
                    json!("homomorphism sample"),
                    "projection not multiplicative on a word pair".into(),
                ));
            }
        }
        Ok(Outcome::verified(
            expected.clone(),
            json!({ "all": "verified", "samples": 200 }),
        ))
    };
    match run() {
        Ok(outcome) => outcome,
        Err(e) => Outcome::error(expected, e.to_string()),
    }
}

fn isolation_check(p: u64, trunc: usize) -> Outcome {
    let targets: Vec<usize> = [7usize, 11, trunc]
        .into_iter()
        .filter(|&n| n <= trunc)
        .collect();
    let expected = json!({
        "targets": targets,
        "role": "finite-level evidence",
        "requirement": "support exactly {n}, two-sided ideal spans the full factor",
    });
    let run = || -> Result<Outcome, RingError> {
        let gens = make_generators(p, trunc)?;
        let basis: SubalgebraBasis = closure_basis(p, trunc, None)?;
        let mut results = Vec::new();
        for &n in &targets {
            let out = isolate_factor(n, &gens, &basis)?;
            let route = match out.route {
                IsolationRoute::SingleCommutator { k } => format!("single commutator k={k}"),
                IsolationRoute::CommutatorProduct { k1, shift, k2 } => {
                    format!("c_{k1} * s^{shift} * c_{k2}")
                }
                IsolationRoute::BasisReduction => "basis reduction".to_string(),
            };
            let support: Vec<usize> = out.element.support().into_iter().collect();
            results.push(json!({
                "coordinate": n,
                "route": route,
                "support": support,
                "ideal_dimension": out.ideal_dimension,
            }));
        }
        // The minimal single-coordinate truncation as well.
        let gens3 = make_generators(p, 3)?;
        let basis3 = closure_basis(p, 3, None)?;
        let out3 = isolate_factor(3, &gens3, &basis3)?;
        results.push(json!({
            "coordinate": 3,
            "trunc": 3,
            "ideal_dimension": out3.ideal_dimension,
        }));
        Ok(Outcome::verified(expected.clone(), json!(results)))
    };
    match run() {
        Ok(outcome) => outcome,
        Err(e @ RingError::IsolationFailed { .. }) | Err(e @ RingError::IdealShortfall { .. }) => {
            Outcome::refuted(expected, serde_json::Value::Null, e.to_string())
        }
        Err(e) => Outcome::error(expected, e.to_string()),
    }
}
