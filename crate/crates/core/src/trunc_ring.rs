//! The truncated ring of matrix sequences `prod_{n=3}^{N} M_n(F_p)`
//! generated by the identity, a cyclic shift `s = (s_n)` with
//! `s_n = e_{1,2} + e_{2,3} + ... + e_{n,1}`, its inverse, and the constant
//! elementary sequences `e_{1,2}` and `e_{2,1}`.
//!
//! Elements optionally carry a formal expression tree over the five
//! generators so the same word can be re-evaluated under the projection
//! onto the cyclic group algebra (shift -> t, constants e12, e21 -> 0).
//!
//! The headline computations: the support of the commutators
//! `[e12, s^{-k} e12 s^k]` obeys a divisor rule, the generated subalgebra
//! closes to the full truncated product, and single factors `M_n(F_p)` can
//! be isolated inside it.

use crate::fpalg::{is_prime, AlgError, CycAlgElement, ElementaryForm, FpMatrix, Ring};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

/// Coordinates start here: 1x1 and 2x2 factors are excluded by definition.
pub const LOW_COORD: usize = 3;

#[derive(Debug, Error)]
pub enum RingError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("truncation bound must be at least {LOW_COORD}, got {0}")]
    BadTruncation(usize),
    #[error("coordinate {0} outside truncation range")]
    BadCoordinate(usize),
    #[error("construction check failed: {0}")]
    ConstructionCheck(String),
    #[error("closure dimension {achieved} short of full dimension {expected}")]
    ClosureShortfall { achieved: usize, expected: usize },
    #[error("element carries no expression tree; cannot re-project")]
    MissingExpr,
    #[error("no isolating element found for coordinate {coordinate}; tried {tried:?}")]
    IsolationFailed {
        coordinate: usize,
        tried: Vec<String>,
    },
    #[error("isolated element generates an ideal of dimension {got}, expected {expected}")]
    IdealShortfall { got: usize, expected: usize },
}

/// Formal word in the five ring generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingExpr {
    One,
    Shift,
    ShiftInv,
    E12,
    E21,
    Neg(Arc<RingExpr>),
    Add(Arc<RingExpr>, Arc<RingExpr>),
    Sub(Arc<RingExpr>, Arc<RingExpr>),
    Mul(Arc<RingExpr>, Arc<RingExpr>),
}

impl RingExpr {
    /// Evaluates the word in `F_p C_N` under shift -> t, e12, e21 -> 0.
    fn eval_cyclic(&self, p: u64, n_cyc: usize) -> Result<CycAlgElement, AlgError> {
        Ok(match self {
            RingExpr::One => CycAlgElement::one_of(p, n_cyc)?,
            RingExpr::Shift => CycAlgElement::monomial(p, n_cyc, 1)?,
            RingExpr::ShiftInv => CycAlgElement::monomial(p, n_cyc, -1)?,
            RingExpr::E12 | RingExpr::E21 => CycAlgElement::zero_of(p, n_cyc)?,
            RingExpr::Neg(x) => x.eval_cyclic(p, n_cyc)?.neg(),
            RingExpr::Add(x, y) => x.eval_cyclic(p, n_cyc)?.add(&y.eval_cyclic(p, n_cyc)?),
            RingExpr::Sub(x, y) => x.eval_cyclic(p, n_cyc)?.sub(&y.eval_cyclic(p, n_cyc)?),
            RingExpr::Mul(x, y) => x.eval_cyclic(p, n_cyc)?.mul(&y.eval_cyclic(p, n_cyc)?),
        })
    }
}

/// One element of the truncated product: a matrix of size n for every
/// coordinate `n` in `[3, hi]`, plus an optional defining word.
#[derive(Clone)]
pub struct TruncRingElement {
    p: u64,
    hi: usize,
    coords: Vec<FpMatrix>,
    expr: Option<Arc<RingExpr>>,
}

impl PartialEq for TruncRingElement {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.hi == other.hi && self.coords == other.coords
    }
}

impl std::fmt::Debug for TruncRingElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TruncRingElement(p={}, range=[3,{}], support={:?})",
            self.p,
            self.hi,
            self.support()
        )
    }
}

impl TruncRingElement {
    fn from_fn(
        p: u64,
        hi: usize,
        expr: Option<RingExpr>,
        f: impl Fn(usize) -> Result<FpMatrix, AlgError>,
    ) -> Result<Self, RingError> {
        let mut coords = Vec::with_capacity(hi - LOW_COORD + 1);
        for n in LOW_COORD..=hi {
            coords.push(f(n)?);
        }
        Ok(TruncRingElement {
            p,
            hi,
            coords,
            expr: expr.map(Arc::new),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn truncation(&self) -> usize {
        self.hi
    }

    pub fn coordinate(&self, n: usize) -> Result<&FpMatrix, RingError> {
        if !(LOW_COORD..=self.hi).contains(&n) {
            return Err(RingError::BadCoordinate(n));
        }
        Ok(&self.coords[n - LOW_COORD])
    }

    pub fn expr(&self) -> Option<&Arc<RingExpr>> {
        self.expr.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|m| m.is_zero())
    }

    /// Coordinates with a nonzero matrix.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(i, _)| i + LOW_COORD)
            .collect()
    }

    fn combine(
        &self,
        rhs: &Self,
        f: impl Fn(&FpMatrix, &FpMatrix) -> Result<FpMatrix, AlgError>,
        expr: impl Fn(Arc<RingExpr>, Arc<RingExpr>) -> RingExpr,
    ) -> Result<Self, RingError> {
        if self.p != rhs.p || self.hi != rhs.hi {
            return Err(RingError::Alg(AlgError::RingMismatch));
        }
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        let expr = match (&self.expr, &rhs.expr) {
            (Some(a), Some(b)) => Some(Arc::new(expr(Arc::clone(a), Arc::clone(b)))),
            _ => None,
        };
        Ok(TruncRingElement {
            p: self.p,
            hi: self.hi,
            coords,
            expr,
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, RingError> {
        self.combine(rhs, |a, b| a.add(b), RingExpr::Add)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, RingError> {
        self.combine(rhs, |a, b| a.sub(b), RingExpr::Sub)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, RingError> {
        self.combine(rhs, |a, b| a.mul(b), RingExpr::Mul)
    }

    pub fn neg(&self) -> Self {
        TruncRingElement {
            p: self.p,
            hi: self.hi,
            coords: self.coords.iter().map(|m| m.neg()).collect(),
            expr: self
                .expr
                .as_ref()
                .map(|e| Arc::new(RingExpr::Neg(Arc::clone(e)))),
        }
    }

    /// Additive commutator `xy - yx`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self, RingError> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    pub fn pow(&self, k: u64) -> Result<Self, RingError> {
        let mut acc = TruncRingElement::from_fn(self.p, self.hi, Some(RingExpr::One), |n| {
            FpMatrix::identity_fp(n, self.p)
        })?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

/// The five ring generators at truncation `[3, hi]`.
pub struct TruncGenerators {
    pub p: u64,
    pub hi: usize,
    pub one: TruncRingElement,
    pub shift: TruncRingElement,
    pub shift_inv: TruncRingElement,
    pub e12: TruncRingElement,
    pub e21: TruncRingElement,
}

/// Builds the generators: per coordinate n the shift is the cyclic
/// permutation matrix and the constants are `e_{1,2}` and `e_{2,1}` at
/// every size.
pub fn make_generators(p: u64, hi: usize) -> Result<TruncGenerators, RingError> {
    if !is_prime(p) {
        return Err(RingError::Alg(AlgError::NotPrime(p)));
    }
    if hi < LOW_COORD {
        return Err(RingError::BadTruncation(hi));
    }
    let one =
        TruncRingElement::from_fn(p, hi, Some(RingExpr::One), |n| FpMatrix::identity_fp(n, p))?;
    let shift = TruncRingElement::from_fn(p, hi, Some(RingExpr::Shift), |n| cyclic_shift(n, p))?;
    let shift_inv = TruncRingElement::from_fn(p, hi, Some(RingExpr::ShiftInv), |n| {
        cyclic_shift(n, p).map(|m| m.transpose())
    })?;
    let e12 = TruncRingElement::from_fn(p, hi, Some(RingExpr::E12), |n| {
        FpMatrix::elementary_fp(n, 0, 1, 1, p, ElementaryForm::RingForm)
    })?;
    let e21 = TruncRingElement::from_fn(p, hi, Some(RingExpr::E21), |n| {
        FpMatrix::elementary_fp(n, 1, 0, 1, p, ElementaryForm::RingForm)
    })?;
    // The shift really is invertible with the stated inverse.
    let prod = shift.mul(&shift_inv)?;
    if prod != one {
        return Err(RingError::ConstructionCheck(
            "shift * shift_inv != 1".into(),
        ));
    }
    Ok(TruncGenerators {
        p,
        hi,
        one,
        shift,
        shift_inv,
        e12,
        e21,
    })
}

fn cyclic_shift(n: usize, p: u64) -> Result<FpMatrix, AlgError> {
    let mut m = FpMatrix::zero_fp(n, p)?;
    let one = crate::fpalg::FpScalar::new(1, p)?;
    for i in 0..n - 1 {
        m.set(i, i + 1, one);
    }
    m.set(n - 1, 0, one);
    Ok(m)
}

/// The two derived corner elements: `[e12, s^{-1} e12 s]`, which must equal
/// the constant sequence `e_{1,3}`, and `[s^{-1} e21 s, e21] = e_{3,1}`.
/// Equality is asserted coordinatewise, not assumed.
pub struct DerivedCorners {
    pub e13: TruncRingElement,
    pub e31: TruncRingElement,
}

pub fn derived_corners(gens: &TruncGenerators) -> Result<DerivedCorners, RingError> {
    let conj_e12 = gens.shift_inv.mul(&gens.e12)?.mul(&gens.shift)?;
    let e13 = gens.e12.commutator(&conj_e12)?;
    let conj_e21 = gens.shift_inv.mul(&gens.e21)?.mul(&gens.shift)?;
    let e31 = conj_e21.commutator(&gens.e21)?;
    for n in LOW_COORD..=gens.hi {
        let expect13 = FpMatrix::elementary_fp(n, 0, 2, 1, gens.p, ElementaryForm::RingForm)?;
        if e13.coordinate(n)? != &expect13 {
            return Err(RingError::ConstructionCheck(format!(
                "[e12, s^-1 e12 s] is not e_13 at coordinate {n}"
            )));
        }
        let expect31 = FpMatrix::elementary_fp(n, 2, 0, 1, gens.p, ElementaryForm::RingForm)?;
        if e31.coordinate(n)? != &expect31 {
            return Err(RingError::ConstructionCheck(format!(
                "[s^-1 e21 s, e21] is not e_31 at coordinate {n}"
            )));
        }
    }
    Ok(DerivedCorners { e13, e31 })
}

/// `[e12, s^{-k} e12 s^k]`, built by honest matrix arithmetic.
pub fn shifted_commutator(gens: &TruncGenerators, k: u64) -> Result<TruncRingElement, RingError> {
    let s_k = gens.shift.pow(k)?;
    let s_inv_k = gens.shift_inv.pow(k)?;
    let conj = s_inv_k.mul(&gens.e12)?.mul(&s_k)?;
    gens.e12.commutator(&conj)
}

/// The divisor rule: `{n in [3, hi] : n | k-1 or n | k+1}`.
pub fn divisor_support(k: u64, hi: usize) -> BTreeSet<usize> {
    (LOW_COORD..=hi)
        .filter(|&n| {
            let n = n as u64;
            (k - 1) % n == 0 || (k + 1) % n == 0
        })
        .collect()
}

/// Computes the support of `[e12, s^{-k} e12 s^k]` by matrix arithmetic and
/// checks it against the divisor rule; a mismatch would expose an
/// arithmetic bug and is escalated as an error.
pub fn comm_support(gens: &TruncGenerators, k: u64) -> Result<BTreeSet<usize>, RingError> {
    let computed = shifted_commutator(gens, k)?.support();
    let rule = divisor_support(k, gens.hi);
    if computed != rule {
        return Err(RingError::ConstructionCheck(format!(
            "support of [e12, s^-{k} e12 s^{k}] is {computed:?}, divisor rule says {rule:?}"
        )));
    }
    Ok(computed)
}

/// Finite-level vanishing: every coordinate above `n_rel + 2` of
/// `[e12, s^{-(n_rel+1)} e12 s^{n_rel+1}]` is zero.
pub fn vanishing_check(p: u64, n_rel: u64, n_trunc: usize) -> Result<bool, RingError> {
    if n_trunc <= (n_rel + 2) as usize {
        return Err(RingError::BadTruncation(n_trunc));
    }
    let gens = make_generators(p, n_trunc)?;
    let c = shifted_commutator(&gens, n_rel + 1)?;
    Ok(c.support().iter().all(|&n| n <= (n_rel + 2) as usize))
}

// ---------------------------------------------------------------------------
// Subalgebra closure over the flattened coordinate space.
// ---------------------------------------------------------------------------

/// Flat layout of the truncation: coordinate n occupies a block of n^2
/// entries starting at `offsets[n - 3]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncLayout {
    pub p: u64,
    pub hi: usize,
    offsets: Vec<usize>,
    total: usize,
}

impl TruncLayout {
    pub fn new(p: u64, hi: usize) -> Self {
        let mut offsets = Vec::with_capacity(hi - LOW_COORD + 1);
        let mut total = 0usize;
        for n in LOW_COORD..=hi {
            offsets.push(total);
            total += n * n;
        }
        TruncLayout {
            p,
            hi,
            offsets,
            total,
        }
    }

    pub fn total_dimension(&self) -> usize {
        self.total
    }

    pub fn flatten(&self, x: &TruncRingElement) -> Vec<u8> {
        let mut out = vec![0u8; self.total];
        for n in LOW_COORD..=self.hi {
            let base = self.offsets[n - LOW_COORD];
            let m = x.coordinate(n).expect("coordinate in range");
            for i in 0..n {
                for j in 0..n {
                    out[base + i * n + j] = m.get(i, j).value() as u8;
                }
            }
        }
        out
    }

    pub fn unflatten(&self, v: &[u8]) -> Result<TruncRingElement, RingError> {
        let p = self.p;
        let hi = self.hi;
        let mut coords = Vec::with_capacity(hi - LOW_COORD + 1);
        for n in LOW_COORD..=hi {
            let base = self.offsets[n - LOW_COORD];
            let mut m = FpMatrix::zero_fp(n, p)?;
            for i in 0..n {
                for j in 0..n {
                    m.set(
                        i,
                        j,
                        crate::fpalg::FpScalar::new(v[base + i * n + j] as i64, p)?,
                    );
                }
            }
            coords.push(m);
        }
        Ok(TruncRingElement {
            p,
            hi,
            coords,
            expr: None,
        })
    }

    /// Coordinatewise product of a flat vector with a generator, on the
    /// chosen side.
    fn mul_flat(&self, x: &[u8], gen: &TruncRingElement, gen_on_right: bool) -> Vec<u8> {
        let p = self.p as u32;
        let mut out = vec![0u8; self.total];
        for n in LOW_COORD..=self.hi {
            let base = self.offsets[n - LOW_COORD];
            let g = gen.coordinate(n).expect("coordinate in range");
            for i in 0..n {
                for j in 0..n {
                    let mut acc: u32 = 0;
                    for k in 0..n {
                        let (a, b) = if gen_on_right {
                            (x[base + i * n + k] as u32, g.get(k, j).value() as u32)
                        } else {
                            (g.get(i, k).value() as u32, x[base + k * n + j] as u32)
                        };
                        acc += a * b;
                    }
                    out[base + i * n + j] = (acc % p) as u8;
                }
            }
        }
        out
    }
}

/// Row-echelon basis of a subspace of the flattened truncation.
pub struct SubalgebraBasis {
    layout: TruncLayout,
    rows: Vec<Vec<u8>>,
    /// Maps a column to the row that pivots on it, or -1.
    pivot_of_col: Vec<i32>,
}

impl SubalgebraBasis {
    fn new(layout: TruncLayout) -> Self {
        let cols = layout.total_dimension();
        SubalgebraBasis {
            layout,
            rows: Vec::new(),
            pivot_of_col: vec![-1; cols],
        }
    }

    pub fn layout(&self) -> &TruncLayout {
        &self.layout
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn expected_dimension(&self) -> usize {
        self.layout.total_dimension()
    }

    pub fn is_full(&self) -> bool {
        self.dimension() == self.expected_dimension()
    }

    /// Reduces `v` against the basis in place; returns the pivot column if
    /// a nonzero remainder survives.
    fn reduce(&self, v: &mut [u8]) -> Option<usize> {
        let p = self.layout.p as u32;
        for col in 0..v.len() {
            if v[col] == 0 {
                continue;
            }
            let row_idx = self.pivot_of_col[col];
            if row_idx < 0 {
                return Some(col);
            }
            let row = &self.rows[row_idx as usize];
            let c = v[col] as u32;
            for j in col..v.len() {
                if row[j] != 0 {
                    let sub = (c * row[j] as u32) % p;
                    v[j] = ((v[j] as u32 + p - sub) % p) as u8;
                }
            }
        }
        None
    }

    /// Inserts a vector; returns true when it enlarged the span.
    fn insert(&mut self, mut v: Vec<u8>) -> bool {
        let Some(col) = self.reduce(&mut v) else {
            return false;
        };
        let p = self.layout.p;
        let inv = crate::fpalg::FpScalar::reduced(v[col] as i64, p)
            .inv()
            .expect("pivot entry nonzero")
            .value() as u32;
        let pp = p as u32;
        for x in v.iter_mut() {
            *x = ((*x as u32 * inv) % pp) as u8;
        }
        self.pivot_of_col[col] = self.rows.len() as i32;
        self.rows.push(v);
        true
    }

    /// Whether `x` lies in the span.
    pub fn contains(&self, x: &TruncRingElement) -> bool {
        let mut v = self.layout.flatten(x);
        self.reduce(&mut v).is_none()
    }
}

/// Closes the span of the five generators under multiplication by
/// generators on both sides, with incremental echelon insertion; the
/// closure must reach the full dimension `sum_{n=3}^{hi} n^2` or the
/// shortfall is reported as an error.
///
/// `shuffle_seed` permutes the generator processing order; the resulting
/// dimension must not depend on it.
pub fn closure_basis(
    p: u64,
    hi: usize,
    shuffle_seed: Option<u64>,
) -> Result<SubalgebraBasis, RingError> {
    let gens = make_generators(p, hi)?;
    let layout = TruncLayout::new(p, hi);
    let mut seeds: Vec<&TruncRingElement> = vec![
        &gens.one,
        &gens.shift,
        &gens.shift_inv,
        &gens.e12,
        &gens.e21,
    ];
    let mut multipliers: Vec<&TruncRingElement> =
        vec![&gens.shift, &gens.shift_inv, &gens.e12, &gens.e21];
    if let Some(seed) = shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        seeds.shuffle(&mut rng);
        multipliers.shuffle(&mut rng);
    }

    let mut basis = SubalgebraBasis::new(layout);
    let mut queue: Vec<Vec<u8>> = Vec::new();
    for s in &seeds {
        let v = basis.layout.flatten(s);
        if basis.insert(v.clone()) {
            queue.push(v);
        }
    }
    while let Some(v) = queue.pop() {
        if basis.is_full() {
            break;
        }
        for g in &multipliers {
            for right in [true, false] {
                let prod = basis.layout.mul_flat(&v, g, right);
                if basis.insert(prod.clone()) {
                    queue.push(prod);
                }
            }
        }
    }
    if !basis.is_full() {
        return Err(RingError::ClosureShortfall {
            achieved: basis.dimension(),
            expected: basis.expected_dimension(),
        });
    }
    Ok(basis)
}

/// `sum_{n=3}^{hi} n^2`, the dimension the closure must reach.
pub fn full_dimension(hi: usize) -> usize {
    (LOW_COORD..=hi).map(|n| n * n).sum()
}

// ---------------------------------------------------------------------------
// Factor isolation.
// ---------------------------------------------------------------------------

/// How an isolating element was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsolationRoute {
    /// A single commutator `c_k` already has support {n}.
    SingleCommutator { k: u64 },
    /// `c_k1 * s^j * c_k2` with nearly-disjoint divisor supports.
    CommutatorProduct { k1: u64, shift: u64, k2: u64 },
    /// Read out of the full closure basis. Needed whenever n has a proper
    /// divisor m >= 3: any commutator supported at n is supported at m with
    /// a compatible shift congruence, so no product of them cancels m.
    BasisReduction,
}

#[derive(Debug)]
pub struct IsolationOutcome {
    pub coordinate: usize,
    pub element: TruncRingElement,
    pub route: IsolationRoute,
    /// Dimension of the two-sided ideal generated inside the factor.
    pub ideal_dimension: usize,
}

/// Finds an element of the closed subalgebra supported exactly on `{n}` and
/// certifies that the two-sided ideal it generates spans the whole factor
/// `M_n(F_p)`.
pub fn isolate_factor(
    n: usize,
    gens: &TruncGenerators,
    basis: &SubalgebraBasis,
) -> Result<IsolationOutcome, RingError> {
    if !(LOW_COORD..=gens.hi).contains(&n) {
        return Err(RingError::BadCoordinate(n));
    }
    let hi = gens.hi;
    let mut tried: Vec<String> = Vec::new();
    let k_max = 3 * hi as u64;

    // Commutators supported at n: k = +-1 mod n.
    let relevant_ks: Vec<u64> = (1..=k_max)
        .filter(|&k| divisor_support(k, hi).contains(&n))
        .collect();

    // Stage 1: a single commutator with exact support.
    for &k in &relevant_ks {
        let support = divisor_support(k, hi);
        if support.len() == 1 {
            let c = shifted_commutator(gens, k)?;
            debug_assert_eq!(c.support(), support);
            return finish_isolation(n, gens, basis, c, IsolationRoute::SingleCommutator { k });
        }
        tried.push(format!("c_{k} support {support:?}"));
    }

    // Stage 2: products c_k1 * s^j * c_k2 whose rule supports intersect in
    // {n} alone; the middle shift aligns the entries at coordinate n.
    for &k1 in &relevant_ks {
        let s1 = divisor_support(k1, hi);
        for &k2 in &relevant_ks {
            let s2 = divisor_support(k2, hi);
            let inter: BTreeSet<usize> = s1.intersection(&s2).copied().collect();
            if inter.len() != 1 || !inter.contains(&n) {
                continue;
            }
            let c1 = shifted_commutator(gens, k1)?;
            let c2 = shifted_commutator(gens, k2)?;
            for j in 0..n as u64 {
                let mid = gens.shift.pow(j)?;
                let candidate = c1.mul(&mid)?.mul(&c2)?;
                if !candidate.coordinate(n)?.is_zero() {
                    debug_assert!(candidate.support().is_subset(&inter));
                    return finish_isolation(
                        n,
                        gens,
                        basis,
                        candidate,
                        IsolationRoute::CommutatorProduct { k1, shift: j, k2 },
                    );
                }
            }
            tried.push(format!("c_{k1} * s^j * c_{k2} (all j < {n})"));
        }
    }

    // Stage 3: the closure reached full dimension, so the factor indicator
    // is in the span; read it out directly.
    let target = TruncRingElement::from_fn(gens.p, hi, None, |m| {
        if m == n {
            FpMatrix::elementary_fp(m, 0, 0, 1, gens.p, ElementaryForm::RingForm)
        } else {
            FpMatrix::zero_fp(m, gens.p)
        }
    })?;
    if basis.contains(&target) {
        return finish_isolation(n, gens, basis, target, IsolationRoute::BasisReduction);
    }
    tried.push("basis reduction of the factor indicator".into());
    Err(RingError::IsolationFailed {
        coordinate: n,
        tried,
    })
}

fn finish_isolation(
    n: usize,
    gens: &TruncGenerators,
    basis: &SubalgebraBasis,
    element: TruncRingElement,
    route: IsolationRoute,
) -> Result<IsolationOutcome, RingError> {
    let support = element.support();
    if support.len() != 1 || !support.contains(&n) {
        return Err(RingError::ConstructionCheck(format!(
            "candidate support {support:?} is not exactly {{{n}}}"
        )));
    }
    if !basis.contains(&element) {
        return Err(RingError::ConstructionCheck(
            "isolating element escaped the closed subalgebra".into(),
        ));
    }
    let ideal_dimension = factor_ideal_dimension(n, gens, &element)?;
    if ideal_dimension != n * n {
        return Err(RingError::IdealShortfall {
            got: ideal_dimension,
            expected: n * n,
        });
    }
    Ok(IsolationOutcome {
        coordinate: n,
        element,
        route,
        ideal_dimension,
    })
}

/// Dimension of the two-sided ideal generated by `x` inside the single
/// factor `M_n(F_p)`.
fn factor_ideal_dimension(
    n: usize,
    gens: &TruncGenerators,
    x: &TruncRingElement,
) -> Result<usize, RingError> {
    let p = gens.p as u32;
    let dim = n * n;
    let mults: Vec<&FpMatrix> = vec![
        gens.shift.coordinate(n)?,
        gens.shift_inv.coordinate(n)?,
        gens.e12.coordinate(n)?,
        gens.e21.coordinate(n)?,
    ];
    let flatten = |m: &FpMatrix| -> Vec<u8> {
        let mut v = vec![0u8; dim];
        for i in 0..n {
            for j in 0..n {
                v[i * n + j] = m.get(i, j).value() as u8;
            }
        }
        v
    };
    let mat_mul = |a: &[u8], b: &FpMatrix, right: bool| -> Vec<u8> {
        let mut out = vec![0u8; dim];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u32;
                for k in 0..n {
                    let (x, y) = if right {
                        (a[i * n + k] as u32, b.get(k, j).value() as u32)
                    } else {
                        (b.get(i, k).value() as u32, a[k * n + j] as u32)
                    };
                    acc += x * y;
                }
                out[i * n + j] = (acc % p) as u8;
            }
        }
        out
    };

    // Small echelon closure on the n^2-dimensional factor.
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut pivot_of_col = vec![-1i32; dim];
    fn reduce_insert(rows: &mut Vec<Vec<u8>>, pivots: &mut [i32], mut v: Vec<u8>, p: u32) -> bool {
        let dim = v.len();
        for col in 0..dim {
            if v[col] == 0 {
                continue;
            }
            if pivots[col] < 0 {
                let inv = crate::fpalg::FpScalar::reduced(v[col] as i64, p as u64)
                    .inv()
                    .unwrap()
                    .value() as u32;
                for x in v.iter_mut() {
                    *x = ((*x as u32 * inv) % p) as u8;
                }
                pivots[col] = rows.len() as i32;
                rows.push(v);
                return true;
            }
            let row = rows[pivots[col] as usize].clone();
            let c = v[col] as u32;
            for j in col..dim {
                if row[j] != 0 {
                    let sub = (c * row[j] as u32) % p;
                    v[j] = ((v[j] as u32 + p - sub) % p) as u8;
                }
            }
        }
        false
    }

    let start = flatten(x.coordinate(n)?);
    let mut queue = Vec::new();
    if reduce_insert(&mut rows, &mut pivot_of_col, start.clone(), p) {
        queue.push(start);
    }
    while let Some(v) = queue.pop() {
        if rows.len() == dim {
            break;
        }
        for m in &mults {
            for right in [true, false] {
                let prod = mat_mul(&v, m, right);
                if reduce_insert(&mut rows, &mut pivot_of_col, prod.clone(), p) {
                    queue.push(prod);
                }
            }
        }
    }
    Ok(rows.len())
}

/// Re-evaluates the defining word of `x` in the group algebra `F_p C_N`
/// under shift -> t, shift_inv -> t^{-1}, e12, e21 -> 0, 1 -> 1.
pub fn project_group_algebra(
    x: &TruncRingElement,
    n_cyc: usize,
) -> Result<CycAlgElement, RingError> {
    let expr = x.expr().ok_or(RingError::MissingExpr)?;
    Ok(expr.eval_cyclic(x.modulus(), n_cyc)?)
}
