//! Randomized property suites, each at 1000+ cases with fixed seeds, plus
//! a few proptest invariants for the algebra layer.

use framecheck_core::fpalg::{
    group_commutator, ring_commutator, ElementaryForm, FpMatrix, FpScalar, Ring,
};
use framecheck_core::perm::{Parity, Permutation};
use framecheck_core::projective::ProjectiveIndex;
use framecheck_core::trunc_ring::closure_basis;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_permutation(degree: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for i in (1..degree).rev() {
        let j = rng.random_range(0..=i);
        images.swap(i, j);
    }
    Permutation::from_images(images).unwrap()
}

/// Random element of SL_d(F_p) as a word in group elementaries.
fn random_sl(d: usize, p: u64, rng: &mut ChaCha8Rng) -> FpMatrix {
    let mut m = FpMatrix::identity_fp(d, p).unwrap();
    for _ in 0..12 {
        let i = rng.random_range(0..d);
        let mut j = rng.random_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let r = rng.random_range(1..p) as i64;
        let e = FpMatrix::elementary_fp(d, i, j, r, p, ElementaryForm::GroupForm).unwrap();
        m = m.mul(&e).unwrap();
    }
    m
}

#[test]
fn projective_action_homomorphism_1000() {
    let idx = ProjectiveIndex::enumerate(3, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for case in 0..1000 {
        let g = random_sl(6, 3, &mut rng);
        let h = random_sl(6, 3, &mut rng);
        let lhs = idx.act(&g).unwrap().compose(&idx.act(&h).unwrap()).unwrap();
        let rhs = idx.act(&g.mul(&h).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "case {case}");
    }
}

#[test]
fn projective_images_are_even_at_3_9() {
    // Generators and a sample of random SL_9(F_3) words all land in Alt.
    let idx = ProjectiveIndex::enumerate(3, 9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for gen in framecheck_core::crux::elementary_sl_generators(3, 9).unwrap() {
        assert_eq!(idx.act(&gen).unwrap().parity(), Parity::Even);
    }
    for _ in 0..25 {
        let g = random_sl(9, 3, &mut rng);
        assert_eq!(idx.act(&g).unwrap().parity(), Parity::Even);
    }
}

#[test]
fn parity_algebra_1000() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..1000 {
        let degree = rng.random_range(5..60);
        let g = random_permutation(degree, &mut rng);
        let h = random_permutation(degree, &mut rng);
        let gh = g.compose(&h).unwrap();
        assert_eq!(gh.parity(), g.parity().xor(h.parity()));
        // Conjugation preserves cycle type (hence parity).
        let s = random_permutation(degree, &mut rng);
        let conj = g.conjugate(&s).unwrap();
        let mut a: Vec<usize> = g.cycle_decomposition().iter().map(|c| c.len()).collect();
        let mut b: Vec<usize> = conj.cycle_decomposition().iter().map(|c| c.len()).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }
}

#[test]
fn chevalley_identity_1000() {
    // [I + e_{i,j}(x), I + e_{j,k}(y)] = I + e_{i,k}(xy) for distinct i, j, k.
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let primes = [2u64, 3, 5, 7];
    for _ in 0..1000 {
        let p = primes[rng.random_range(0..primes.len())];
        let d = rng.random_range(3..6);
        let mut picks: Vec<usize> = (0..d).collect();
        for t in (1..d).rev() {
            let s = rng.random_range(0..=t);
            picks.swap(t, s);
        }
        let (i, j, k) = (picks[0], picks[1], picks[2]);
        let x = rng.random_range(1..p) as i64;
        let y = rng.random_range(1..p) as i64;
        let a = FpMatrix::elementary_fp(d, i, j, x, p, ElementaryForm::GroupForm).unwrap();
        let b = FpMatrix::elementary_fp(d, j, k, y, p, ElementaryForm::GroupForm).unwrap();
        let lhs = a.group_commutator_with(&b).unwrap();
        let rhs = FpMatrix::elementary_fp(d, i, k, x * y, p, ElementaryForm::GroupForm).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn ring_commutator_bilinear_and_jacobi_1000() {
    let mut rng = ChaCha8Rng::seed_from_u64(4321);
    let random_mat = |rng: &mut ChaCha8Rng, d: usize, p: u64| {
        let mut m = FpMatrix::zero_fp(d, p).unwrap();
        for i in 0..d {
            for j in 0..d {
                m.set(
                    i,
                    j,
                    FpScalar::new(rng.random_range(0..p) as i64, p).unwrap(),
                );
            }
        }
        m
    };
    for _ in 0..1000 {
        let p = [3u64, 5][rng.random_range(0..2)];
        let d = rng.random_range(2..5);
        let x = random_mat(&mut rng, d, p);
        let y = random_mat(&mut rng, d, p);
        let z = random_mat(&mut rng, d, p);
        // Bilinearity in the first slot.
        let lhs = ring_commutator(&x.add(&y).unwrap(), &z).unwrap();
        let rhs = ring_commutator(&x, &z)
            .unwrap()
            .add(&ring_commutator(&y, &z).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        // Jacobi identity.
        let j1 = ring_commutator(&x, &ring_commutator(&y, &z).unwrap()).unwrap();
        let j2 = ring_commutator(&y, &ring_commutator(&z, &x).unwrap()).unwrap();
        let j3 = ring_commutator(&z, &ring_commutator(&x, &y).unwrap()).unwrap();
        assert!(j1.add(&j2).unwrap().add(&j3).unwrap().is_zero());
    }
}

#[test]
fn determinant_multiplicative_1000() {
    let mut rng = ChaCha8Rng::seed_from_u64(5555);
    for _ in 0..1000 {
        let p = [2u64, 3, 5, 7][rng.random_range(0..4)];
        let d = rng.random_range(2..5);
        let mut a = FpMatrix::zero_fp(d, p).unwrap();
        let mut b = FpMatrix::zero_fp(d, p).unwrap();
        for i in 0..d {
            for j in 0..d {
                a.set(
                    i,
                    j,
                    FpScalar::new(rng.random_range(0..p) as i64, p).unwrap(),
                );
                b.set(
                    i,
                    j,
                    FpScalar::new(rng.random_range(0..p) as i64, p).unwrap(),
                );
            }
        }
        assert_eq!(a.mul(&b).unwrap().det(), a.det().mul(&b.det()));
    }
}

#[test]
fn closure_order_independence_at_n10() {
    let baseline = closure_basis(3, 10, None).unwrap().dimension();
    assert_eq!(baseline, 380);
    for seed in [11u64, 22, 33] {
        assert_eq!(
            closure_basis(3, 10, Some(seed)).unwrap().dimension(),
            baseline
        );
    }
}

#[test]
fn labeling_invariants_exhaustive() {
    // build_labeling checks both cube invariants at all 9477 moved points;
    // re-walk a sample of labels from the public API as well.
    let params = framecheck_core::crux::CruxParams::new(3, 3).unwrap();
    let idx = ProjectiveIndex::enumerate(3, 9).unwrap();
    let v = idx.act(&params.transvection_matrix().unwrap()).unwrap();
    let q = idx.act(&params.involution_matrix().unwrap()).unwrap();
    let labeling = framecheck_core::crux::build_labeling(&params, &v, &q).unwrap();
    for cube in (0..labeling.cube_count()).step_by(35) {
        for j in 0..3 {
            for k in 0..3 {
                for m in 0..3 {
                    let pt = labeling.point(cube, j, k, m);
                    assert_eq!(v.apply(pt), labeling.point(cube, (j + 1) % 3, k, m));
                    assert_eq!(
                        q.apply(pt),
                        labeling.point(cube, j, (3 - k) % 3, (3 - m) % 3)
                    );
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn compose_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degree = rng.random_range(3..40);
        let a = random_permutation(degree, &mut rng);
        let b = random_permutation(degree, &mut rng);
        let c = random_permutation(degree, &mut rng);
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn conjugation_respects_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degree = rng.random_range(3..40);
        let g = random_permutation(degree, &mut rng);
        let h = random_permutation(degree, &mut rng);
        let s = random_permutation(degree, &mut rng);
        let lhs = g.conjugate(&s).unwrap().compose(&h.conjugate(&s).unwrap()).unwrap();
        let rhs = g.compose(&h).unwrap().conjugate(&s).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn order_is_minimal_identity_power(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degree = rng.random_range(2..30);
        let g = random_permutation(degree, &mut rng);
        let ord: u64 = g.order().to_string().parse().unwrap();
        prop_assert!(g.pow(ord).is_identity());
        // Minimality: dropping any prime factor breaks it.
        let mut rest = ord;
        let mut d = 2u64;
        while d * d <= rest {
            if rest % d == 0 {
                prop_assert!(!g.pow(ord / d).is_identity());
                while rest % d == 0 {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            prop_assert!(!g.pow(ord / rest).is_identity());
        }
    }

    #[test]
    fn cyclic_algebra_mul_commutes(ca in prop::collection::vec(0i64..5, 4), cb in prop::collection::vec(0i64..5, 4)) {
        use framecheck_core::fpalg::CycAlgElement;
        let a = CycAlgElement::from_coeffs(5, ca).unwrap();
        let b = CycAlgElement::from_coeffs(5, cb).unwrap();
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn group_commutator_identity_cases(x in 1i64..3, d in 3usize..6) {
        // [I, y] = I over F_3 for elementary y; the adjugate path covers
        // d <= 4, the Gauss-Jordan path the rest.
        let id = FpMatrix::identity_fp(d, 3).unwrap();
        let y = FpMatrix::elementary_fp(d, 0, d - 1, x, 3, ElementaryForm::GroupForm).unwrap();
        let c = if d <= 4 {
            group_commutator(&id, &y).unwrap()
        } else {
            id.group_commutator_with(&y).unwrap()
        };
        prop_assert!(c.is_identity());
    }
}
