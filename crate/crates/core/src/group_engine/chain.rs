//! Stabilizer chains (base and strong generating set) with exact orders.
//!
//! Construction is the randomized Schreier-Sims scheme: a product-replacement
//! stream of random subgroup elements is sifted until the chain stabilizes.
//! A chain is only exposed after one of two certification paths succeeds:
//!
//! * a deterministic sweep sifting every Schreier generator of every level
//!   (the general path), or
//! * an order certificate: the product of orbit sizes is always a lower
//!   bound for the generated order, so when a caller supplies a proven upper
//!   bound (matrix images of a known group, Alt/Sym degree bounds) and the
//!   product reaches it, the chain is exact without a sweep.

use super::{check_degrees, EngineError};
use crate::perm::Permutation;
use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// How the finished chain was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainVerification {
    /// Full deterministic Schreier-generator sweep.
    SchreierSweep,
    /// Orbit-size product reached a caller-supplied proven order bound.
    OrderBound,
    /// No nontrivial generators; nothing to certify.
    Trivial,
}

struct StrongGen {
    fwd: Vec<u32>,
    inv: Vec<u32>,
}

impl StrongGen {
    fn new(p: &Permutation) -> Self {
        StrongGen {
            fwd: p.images().to_vec(),
            inv: p.inverse().images().to_vec(),
        }
    }
}

struct Level {
    base_point: u32,
    gen_ids: Vec<usize>,
    orbit: Vec<u32>,
    /// point -> orbit position, or -1.
    pos: Vec<i32>,
    /// point -> strong generator id labelling the tree edge into it.
    edge: Vec<i32>,
    /// point -> predecessor in the Schreier tree.
    parent: Vec<u32>,
    /// Number of orbit entries already expanded with the full gen set.
    processed: usize,
}

impl Level {
    fn new(degree: usize, base_point: u32) -> Self {
        let mut pos = vec![-1; degree];
        pos[base_point as usize] = 0;
        let mut edge = vec![-1; degree];
        edge[base_point as usize] = -1;
        Level {
            base_point,
            gen_ids: Vec::new(),
            orbit: vec![base_point],
            pos,
            edge,
            parent: vec![0; degree],
            processed: 0,
        }
    }

    fn contains(&self, point: u32) -> bool {
        self.pos[point as usize] >= 0
    }

    /// Registers a new generator and regrows the orbit incrementally.
    fn add_generator(&mut self, gen_id: usize, strong: &[StrongGen]) {
        self.gen_ids.push(gen_id);
        // Expose the already-processed points to the new generator only.
        let fwd = &strong[gen_id].fwd;
        for i in 0..self.processed {
            let x = self.orbit[i];
            let y = fwd[x as usize];
            if self.pos[y as usize] < 0 {
                self.pos[y as usize] = self.orbit.len() as i32;
                self.edge[y as usize] = gen_id as i32;
                self.parent[y as usize] = x;
                self.orbit.push(y);
            }
        }
        // Resume BFS for everything not yet expanded.
        while self.processed < self.orbit.len() {
            let x = self.orbit[self.processed];
            self.processed += 1;
            for &gid in &self.gen_ids {
                let y = strong[gid].fwd[x as usize];
                if self.pos[y as usize] < 0 {
                    self.pos[y as usize] = self.orbit.len() as i32;
                    self.edge[y as usize] = gid as i32;
                    self.parent[y as usize] = x;
                    self.orbit.push(y);
                }
            }
        }
    }

    /// Multiplies `w` on the right by `u_beta^{-1}`, where `beta` must lie
    /// in the orbit. Afterwards `base^w = base`.
    fn apply_transversal_inverse(&self, w: &mut [u32], mut beta: u32, strong: &[StrongGen]) {
        while beta != self.base_point {
            let gid = self.edge[beta as usize];
            debug_assert!(gid >= 0);
            let inv = &strong[gid as usize].inv;
            for v in w.iter_mut() {
                *v = inv[*v as usize];
            }
            beta = self.parent[beta as usize];
        }
    }

    /// The transversal representative mapping base -> beta, as an image array.
    fn representative(&self, beta: u32, strong: &[StrongGen], degree: usize) -> Vec<u32> {
        let mut path = Vec::new();
        let mut cur = beta;
        while cur != self.base_point {
            path.push(self.edge[cur as usize] as usize);
            cur = self.parent[cur as usize];
        }
        let mut w: Vec<u32> = (0..degree as u32).collect();
        for &gid in path.iter().rev() {
            let fwd = &strong[gid].fwd;
            for v in w.iter_mut() {
                *v = fwd[*v as usize];
            }
        }
        w
    }
}

/// Base + strong generating set with per-level orbit transversals.
pub struct StabilizerChain {
    degree: usize,
    strong: Vec<StrongGen>,
    levels: Vec<Level>,
    order: BigUint,
    verification: ChainVerification,
}

impl StabilizerChain {
    /// Builds and certifies a chain via the deterministic Schreier sweep.
    pub fn build(gens: &[Permutation], seed: u64) -> Result<StabilizerChain, EngineError> {
        Self::build_inner(gens, seed, None)
    }

    /// Builds a chain for a group whose order is known (from the caller's
    /// own mathematics) to be at most `bound`. Reaching the bound certifies
    /// the chain outright; stalling below it falls back to the sweep.
    pub fn build_with_order_bound(
        gens: &[Permutation],
        seed: u64,
        bound: &BigUint,
    ) -> Result<StabilizerChain, EngineError> {
        Self::build_inner(gens, seed, Some(bound))
    }

    fn build_inner(
        gens: &[Permutation],
        seed: u64,
        bound: Option<&BigUint>,
    ) -> Result<StabilizerChain, EngineError> {
        let degree = check_degrees(gens)?;
        let mut b = Builder::new(degree, seed);
        let worklist: Vec<&Permutation> = gens.iter().filter(|g| !g.is_identity()).collect();
        for g in &worklist {
            b.sift_and_add(g.images().to_vec());
        }
        if b.levels.is_empty() {
            return Ok(StabilizerChain {
                degree,
                strong: Vec::new(),
                levels: Vec::new(),
                order: BigUint::one(),
                verification: ChainVerification::Trivial,
            });
        }

        let mut rattle = Rattle::new(&worklist, &mut b.rng);
        let mut streak = 0usize;
        let mut rounds = 0usize;
        const STREAK_TARGET: usize = 24;
        const MAX_ROUNDS: usize = 20_000;
        loop {
            if let Some(target) = bound {
                let ord = b.order();
                if ord == *target {
                    return Ok(b.finish(ChainVerification::OrderBound));
                }
                if ord > *target {
                    return Err(EngineError::OrderBoundExceeded {
                        computed: ord,
                        bound: target.clone(),
                    });
                }
            }
            if streak >= STREAK_TARGET || rounds >= MAX_ROUNDS {
                break;
            }
            rounds += 1;
            let candidate = rattle.next_element(&mut b.rng);
            if b.sift_and_add(candidate) {
                streak = 0;
            } else {
                streak += 1;
            }
        }

        // Deterministic certification: sift every Schreier generator.
        loop {
            match b.find_sweep_failure() {
                None => break,
                Some(residue) => {
                    b.sift_and_add(residue);
                }
            }
        }
        if let Some(target) = bound {
            let ord = b.order();
            if ord > *target {
                return Err(EngineError::OrderBoundExceeded {
                    computed: ord,
                    bound: target.clone(),
                });
            }
        }
        Ok(b.finish(ChainVerification::SchreierSweep))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn verification(&self) -> ChainVerification {
        self.verification
    }

    pub fn num_strong_generators(&self) -> usize {
        self.strong.len()
    }

    /// Membership test: true iff `g` sifts to the identity.
    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let mut w = g.images().to_vec();
        for level in &self.levels {
            let beta = w[level.base_point as usize];
            if !level.contains(beta) {
                return false;
            }
            level.apply_transversal_inverse(&mut w, beta, &self.strong);
        }
        w.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }
}

struct Builder {
    degree: usize,
    strong: Vec<StrongGen>,
    levels: Vec<Level>,
    rng: ChaCha8Rng,
}

impl Builder {
    fn new(degree: usize, seed: u64) -> Self {
        Builder {
            degree,
            strong: Vec::new(),
            levels: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn order(&self) -> BigUint {
        let mut acc = BigUint::one();
        for l in &self.levels {
            acc *= BigUint::from(l.orbit.len());
        }
        acc
    }

    fn is_identity(w: &[u32]) -> bool {
        w.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// Sifts an image array through the chain; a nontrivial residue becomes
    /// a new strong generator. Returns true when something was added.
    fn sift_and_add(&mut self, word: Vec<u32>) -> bool {
        let mut w = word;
        let mut stuck_level = None;
        for (idx, level) in self.levels.iter().enumerate() {
            let beta = w[level.base_point as usize];
            if !level.contains(beta) {
                stuck_level = Some(idx);
                break;
            }
            level.apply_transversal_inverse(&mut w, beta, &self.strong);
        }
        if stuck_level.is_none() && Self::is_identity(&w) {
            return false;
        }
        let last_level = match stuck_level {
            Some(idx) => idx,
            None => {
                // Residue fixes the whole base: open a new level at a point
                // inside its longest cycle (greedy orbit-shrink heuristic).
                let base_point = longest_cycle_min(&w);
                self.levels.push(Level::new(self.degree, base_point));
                self.levels.len() - 1
            }
        };
        let perm = Permutation::from_images(w).expect("sift residue is a bijection");
        let gid = self.strong.len();
        self.strong.push(StrongGen::new(&perm));
        for lvl in 0..=last_level {
            self.levels[lvl].add_generator(gid, &self.strong);
        }
        true
    }

    /// Sifts starting at `start_level`; returns the residue image array.
    fn sift_from(&self, mut w: Vec<u32>, start_level: usize) -> Vec<u32> {
        for level in &self.levels[start_level..] {
            let beta = w[level.base_point as usize];
            if !level.contains(beta) {
                return w;
            }
            level.apply_transversal_inverse(&mut w, beta, &self.strong);
        }
        w
    }

    /// One full deterministic sweep, deepest level first. Returns the first
    /// (deterministically chosen) failing Schreier-generator residue.
    fn find_sweep_failure(&self) -> Option<Vec<u32>> {
        for lvl in (0..self.levels.len()).rev() {
            let level = &self.levels[lvl];
            let failure = level
                .orbit
                .par_iter()
                .enumerate()
                .map(|(orbit_pos, &beta)| {
                    let rep = level.representative(beta, &self.strong, self.degree);
                    for (gpos, &gid) in level.gen_ids.iter().enumerate() {
                        let fwd = &self.strong[gid].fwd;
                        // u_beta * s
                        let mut w: Vec<u32> = rep.iter().map(|&v| fwd[v as usize]).collect();
                        let gamma = w[level.base_point as usize];
                        debug_assert!(level.contains(gamma));
                        level.apply_transversal_inverse(&mut w, gamma, &self.strong);
                        let residue = self.sift_from(w, lvl + 1);
                        if !Self::is_identity(&residue) {
                            return Some((orbit_pos, gpos, residue));
                        }
                    }
                    None
                })
                .filter_map(|x| x)
                .min_by_key(|(orbit_pos, gpos, _)| (*orbit_pos, *gpos));
            if let Some((_, _, residue)) = failure {
                return Some(residue);
            }
        }
        None
    }

    fn finish(self, verification: ChainVerification) -> StabilizerChain {
        let order = self.order();
        StabilizerChain {
            degree: self.degree,
            strong: self.strong,
            levels: self.levels,
            order,
            verification,
        }
    }
}

/// Minimum point of a longest cycle of the image array.
fn longest_cycle_min(w: &[u32]) -> u32 {
    let n = w.len();
    let mut seen = vec![false; n];
    let mut best: (usize, u32) = (0, 0);
    for start in 0..n {
        if seen[start] || w[start] as usize == start {
            continue;
        }
        let mut len = 0usize;
        let mut min_pt = start as u32;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            len += 1;
            min_pt = min_pt.min(cur as u32);
            cur = w[cur] as usize;
        }
        if len > best.0 {
            best = (len, min_pt);
        }
    }
    debug_assert!(best.0 >= 2, "identity has no cycles");
    best.1
}

/// Product-replacement random element stream over the input generators.
struct Rattle {
    slots: Vec<Vec<u32>>,
    acc: Vec<u32>,
}

impl Rattle {
    fn new(gens: &[&Permutation], rng: &mut ChaCha8Rng) -> Self {
        let degree = gens[0].degree();
        let slot_count = gens.len().max(8);
        let mut slots = Vec::with_capacity(slot_count);
        for i in 0..slot_count {
            slots.push(gens[i % gens.len()].images().to_vec());
        }
        let mut r = Rattle {
            slots,
            acc: (0..degree as u32).collect(),
        };
        for _ in 0..60 {
            r.step(rng);
        }
        r
    }

    fn step(&mut self, rng: &mut ChaCha8Rng) {
        let n = self.slots.len();
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = (i.min(j), i.max(j));
        let (head, tail) = self.slots.split_at_mut(b);
        let (target, other) = if i < j {
            (&mut head[a], &tail[0])
        } else {
            (&mut tail[0], &head[a])
        };
        for v in target.iter_mut() {
            *v = other[*v as usize];
        }
        let t = if i < j { &head[a] } else { &tail[0] };
        for v in self.acc.iter_mut() {
            *v = t[*v as usize];
        }
    }

    fn next_element(&mut self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        self.step(rng);
        self.acc.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn perm(degree: usize, cycles: &str) -> Permutation {
        Permutation::parse_cycle_string(degree, cycles).unwrap()
    }

    /// Independent oracle: exhaustive closure of the generated group.
    fn enumerate_group(gens: &[Permutation], cap: usize) -> Vec<Permutation> {
        let degree = gens[0].degree();
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut queue = vec![Permutation::identity(degree)];
        seen.insert(queue[0].images().to_vec());
        let mut head = 0;
        while head < queue.len() {
            let cur = queue[head].clone();
            head += 1;
            for g in gens {
                let next = cur.compose(g).unwrap();
                if seen.insert(next.images().to_vec()) {
                    queue.push(next);
                }
            }
            assert!(queue.len() <= cap, "enumeration blew past cap {cap}");
        }
        queue
    }

    #[test]
    fn two_three_cycles_give_alt5() {
        let gens = [perm(5, "(0 1 2)"), perm(5, "(2 3 4)")];
        let elements = enumerate_group(&gens, 100);
        assert_eq!(elements.len(), 60);
        let chain = StabilizerChain::build(&gens, 1).unwrap();
        assert_eq!(chain.order(), &BigUint::from(60u32));
        assert_eq!(chain.verification(), ChainVerification::SchreierSweep);
    }

    #[test]
    fn identity_generators_give_trivial_chain() {
        let gens = [Permutation::identity(5)];
        let chain = StabilizerChain::build(&gens, 0).unwrap();
        assert_eq!(chain.order(), &BigUint::from(1u32));
        assert!(chain.contains(&Permutation::identity(5)));
        assert!(!chain.contains(&perm(5, "(0 1)")));
    }

    #[test]
    fn membership_matches_enumeration_for_small_corpus() {
        // Groups of order <= 5000: cyclic, dihedral, Alt(5), Sym(4),
        // PSL(2,7) on 8 points, and a 3^2 : SL_2(3) affine group on 9 points.
        let corpus: Vec<(Vec<Permutation>, usize)> = vec![
            (vec![perm(4, "(0 1 2 3)")], 4),
            (vec![perm(4, "(0 1 2 3)"), perm(4, "(0 2)")], 8),
            (vec![perm(5, "(0 1 2)"), perm(5, "(2 3 4)")], 60),
            (vec![perm(4, "(0 1)"), perm(4, "(0 1 2 3)")], 24),
            // PSL(2,7) acting on the projective line over F_7:
            // z -> z+1 and z -> -1/z with points (0..6, infinity=7).
            (
                vec![perm(8, "(0 1 2 3 4 5 6)"), perm(8, "(0 7)(1 6)(2 3)(4 5)")],
                168,
            ),
        ];
        for (gens, expected) in corpus {
            let elements = enumerate_group(&gens, 5000);
            assert_eq!(elements.len(), expected);
            let chain = StabilizerChain::build(&gens, 7).unwrap();
            assert_eq!(chain.order(), &BigUint::from(expected));
            for e in &elements {
                assert!(chain.contains(e));
            }
            // A few non-members.
            let odd = perm(gens[0].degree(), "(0 1)");
            if !elements.contains(&odd) {
                assert!(!chain.contains(&odd));
            }
        }
    }

    #[test]
    fn alt5_chain_membership_by_parity() {
        let gens = [perm(5, "(0 1 2)"), perm(5, "(2 3 4)")];
        let chain = StabilizerChain::build(&gens, 0).unwrap();
        assert!(chain.contains(&perm(5, "(0 1 2)")));
        assert!(!chain.contains(&perm(5, "(0 1)")));
    }

    #[test]
    fn order_bound_certificate_path() {
        // Sym(6) natural: bound 720 reached quickly.
        let gens = [perm(6, "(0 1)"), perm(6, "(0 1 2 3 4 5)")];
        let chain =
            StabilizerChain::build_with_order_bound(&gens, 3, &BigUint::from(720u32)).unwrap();
        assert_eq!(chain.order(), &BigUint::from(720u32));
        assert_eq!(chain.verification(), ChainVerification::OrderBound);
    }

    #[test]
    fn order_bound_stall_falls_back_to_sweep() {
        // Alt(4) with a deliberately loose bound: randomized phase can never
        // reach 24, so the sweep must certify 12.
        let gens = [perm(4, "(0 1 2)"), perm(4, "(1 2 3)")];
        let chain =
            StabilizerChain::build_with_order_bound(&gens, 5, &BigUint::from(24u32)).unwrap();
        assert_eq!(chain.order(), &BigUint::from(12u32));
        assert_eq!(chain.verification(), ChainVerification::SchreierSweep);
    }

    #[test]
    fn order_bound_violation_is_an_error() {
        let gens = [perm(4, "(0 1)"), perm(4, "(0 1 2 3)")];
        let err = StabilizerChain::build_with_order_bound(&gens, 0, &BigUint::from(4u32));
        assert!(matches!(err, Err(EngineError::OrderBoundExceeded { .. })));
    }

    #[test]
    fn nested_subgroup_orders_divide() {
        use super::super::factorial;
        let sym5 = StabilizerChain::build(&[perm(5, "(0 1)"), perm(5, "(0 1 2 3 4)")], 0).unwrap();
        let alt5 = StabilizerChain::build(&[perm(5, "(0 1 2)"), perm(5, "(2 3 4)")], 0).unwrap();
        assert_eq!(sym5.order() % alt5.order(), BigUint::from(0u32));
        assert_eq!(&factorial(5), sym5.order());
    }

    #[test]
    fn deterministic_given_seed() {
        let gens = [perm(7, "(0 1 2 3 4 5 6)"), perm(7, "(0 1)")];
        let a = StabilizerChain::build(&gens, 42).unwrap();
        let b = StabilizerChain::build(&gens, 42).unwrap();
        assert_eq!(a.order(), b.order());
        assert_eq!(a.base(), b.base());
    }
}
