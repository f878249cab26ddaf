//! The projective space `P(F_p^d)`: canonical point enumeration, conversion
//! of invertible matrices to permutations of the points, and scalar-kernel
//! bookkeeping for the resulting homomorphism.
//!
//! Canonical representatives scale each line so its first nonzero coordinate
//! is 1; the table is ordered lexicographically. Both choices are load
//! bearing: point indices must be byte-stable across runs so that exported
//! permutations and reports diff cleanly.

use crate::fpalg::{is_prime, AlgError, FpMatrix, Ring};
use crate::perm::{PermError, Permutation};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use thiserror::Error;

/// Keep point tables comfortably inside the permutation degree bound.
pub const MAX_POINTS: usize = crate::perm::MAX_DEGREE;

#[derive(Debug, Error)]
pub enum ProjError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("point count {0} exceeds the configured degree bound {MAX_POINTS}")]
    TooManyPoints(u128),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("matrix size {got} does not match the point table dimension {expected}")]
    SizeMismatch { got: usize, expected: usize },
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache file corrupt: {0}")]
    CorruptCache(String),
}

/// Number of projective points `(p^d - 1) / (p - 1)` as u128.
pub fn point_count(p: u64, d: usize) -> u128 {
    let mut acc: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..d {
        acc += power;
        power *= p as u128;
    }
    acc
}

/// Order of `SL_d(F_p)`: `p^{d(d-1)/2} * prod_{i=2}^{d} (p^i - 1)`.
pub fn sl_order(p: u64, d: usize) -> num_bigint::BigUint {
    use num_bigint::BigUint;
    let p_big = BigUint::from(p);
    let mut acc = p_big.pow((d * (d - 1) / 2) as u32);
    for i in 2..=d {
        acc *= p_big.pow(i as u32) - 1u32;
    }
    acc
}

/// Size of the scalar kernel of the projective action restricted to SL_d:
/// the number of lambda in F_p^* with lambda^d = 1, i.e. gcd(d, p-1).
pub fn scalar_kernel_size(p: u64, d: usize) -> u64 {
    num_integer::gcd(d as u64, p - 1)
}

/// Order of the image of `SL_d(F_p)` on projective points.
pub fn psl_image_order(p: u64, d: usize) -> num_bigint::BigUint {
    sl_order(p, d) / scalar_kernel_size(p, d)
}

/// Ordered table of the points of `P(F_p^d)`.
pub struct ProjectiveIndex {
    p: u64,
    d: usize,
    /// Canonical representatives, lexicographically sorted, digits in `0..p`.
    reps: Vec<Vec<u8>>,
}

impl ProjectiveIndex {
    /// Enumerates the projective points of `F_p^d`.
    pub fn enumerate(p: u64, d: usize) -> Result<Self, ProjError> {
        if !is_prime(p) {
            return Err(ProjError::Alg(AlgError::NotPrime(p)));
        }
        if d < 2 {
            return Err(ProjError::DimensionTooSmall(d));
        }
        let count = point_count(p, d);
        if count > MAX_POINTS as u128 {
            return Err(ProjError::TooManyPoints(count));
        }
        let mut reps = Vec::with_capacity(count as usize);
        // Lex order: vectors with a later leading 1 sort first, and within a
        // fixed leading position the free tail counts up in base p.
        for lead in (0..d).rev() {
            let tail_len = d - lead - 1;
            let mut tail = vec![0u8; tail_len];
            loop {
                let mut v = vec![0u8; d];
                v[lead] = 1;
                v[lead + 1..].copy_from_slice(&tail);
                reps.push(v);
                // Increment the tail as a base-p counter, most significant
                // digit first so the table stays lexicographic.
                let mut k = tail_len;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    tail[k] += 1;
                    if tail[k] < p as u8 {
                        break;
                    }
                    tail[k] = 0;
                }
                if tail.iter().all(|&t| t == 0) {
                    break;
                }
            }
        }
        debug_assert_eq!(reps.len() as u128, count);
        debug_assert!(reps.windows(2).all(|w| w[0] < w[1]));
        Ok(ProjectiveIndex { p, d, reps })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representative(&self, index: usize) -> &[u8] {
        &self.reps[index]
    }

    /// Index of a canonical representative, computed arithmetically from
    /// the table layout (no search).
    fn rank_canonical(&self, v: &[u8]) -> usize {
        let lead = v.iter().position(|&c| c != 0).expect("nonzero vector");
        // Points with leading position strictly later: (p^(d-1-lead) - 1)/(p - 1).
        let mut before: usize = 0;
        let mut power: usize = 1;
        for _ in 0..self.d - 1 - lead {
            before += power;
            power *= self.p as usize;
        }
        let mut tail_value: usize = 0;
        for &c in &v[lead + 1..] {
            tail_value = tail_value * self.p as usize + c as usize;
        }
        before + tail_value
    }

    /// Index of an arbitrary nonzero vector after canonical rescaling.
    pub fn index_of(&self, v: &[u8]) -> Option<usize> {
        let lead = v.iter().position(|&c| c != 0)?;
        let scale = crate::fpalg::FpScalar::reduced(v[lead] as i64, self.p).inv()?;
        let mut canonical = vec![0u8; self.d];
        for (i, &c) in v.iter().enumerate() {
            canonical[i] = ((c as u64 * scale.value()) % self.p) as u8;
        }
        Some(self.rank_canonical(&canonical))
    }

    /// The permutation of point indices induced by the row-vector right
    /// action `[x] -> [x g]`.
    pub fn act(&self, g: &FpMatrix) -> Result<Permutation, ProjError> {
        if g.size() != self.d {
            return Err(ProjError::SizeMismatch {
                got: g.size(),
                expected: self.d,
            });
        }
        if g.modulus() != self.p {
            return Err(ProjError::Alg(AlgError::RingMismatch));
        }
        if g.det().is_zero() {
            return Err(ProjError::Alg(AlgError::Singular));
        }
        // Flatten the matrix once; the inner loop is pure integer work.
        let d = self.d;
        let p = self.p;
        let mut flat = vec![0u64; d * d];
        for i in 0..d {
            for j in 0..d {
                flat[i * d + j] = g.get(i, j).value();
            }
        }
        let mut images = vec![0u32; self.reps.len()];
        let mut row = vec![0u8; d];
        for (idx, rep) in self.reps.iter().enumerate() {
            for j in 0..d {
                let mut acc: u64 = 0;
                for (i, &c) in rep.iter().enumerate() {
                    if c != 0 {
                        acc += c as u64 * flat[i * d + j];
                    }
                }
                row[j] = (acc % p) as u8;
            }
            let image = self
                .index_of(&row)
                .ok_or_else(|| ProjError::CorruptCache("zero image of a point".into()))?;
            images[idx] = image as u32;
        }
        Ok(Permutation::from_images(images)?)
    }

    /// Writes the table in the flat binary cache format:
    /// header `p: u32 | d: u32 | count: u64` (little endian), then one u64
    /// per point holding its packed base-p digits (position 0 least
    /// significant).
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<(), ProjError> {
        w.write_all(&(self.p as u32).to_le_bytes())?;
        w.write_all(&(self.d as u32).to_le_bytes())?;
        w.write_all(&(self.reps.len() as u64).to_le_bytes())?;
        for rep in &self.reps {
            let mut packed: u64 = 0;
            for &c in rep.iter().rev() {
                packed = packed * self.p + c as u64;
            }
            w.write_all(&packed.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_cache<R: Read>(mut r: R) -> Result<Self, ProjError> {
        let mut buf4 = [0u8; 4];
        let mut buf8 = [0u8; 8];
        r.read_exact(&mut buf4)?;
        let p = u32::from_le_bytes(buf4) as u64;
        r.read_exact(&mut buf4)?;
        let d = u32::from_le_bytes(buf4) as usize;
        r.read_exact(&mut buf8)?;
        let count = u64::from_le_bytes(buf8) as usize;
        if !is_prime(p) || d < 2 || count as u128 != point_count(p, d) {
            return Err(ProjError::CorruptCache(format!(
                "bad header p={p} d={d} count={count}"
            )));
        }
        let mut reps = Vec::with_capacity(count);
        for _ in 0..count {
            r.read_exact(&mut buf8)?;
            let mut packed = u64::from_le_bytes(buf8);
            let mut v = vec![0u8; d];
            for digit in v.iter_mut() {
                *digit = (packed % p) as u8;
                packed /= p;
            }
            if packed != 0 {
                return Err(ProjError::CorruptCache(
                    "packed digits overflow dimension".into(),
                ));
            }
            reps.push(v);
        }
        if !reps.windows(2).all(|w| w[0] < w[1]) {
            return Err(ProjError::CorruptCache("table not sorted".into()));
        }
        Ok(ProjectiveIndex { p, d, reps })
    }
}

/// Scalar-kernel report for the projective action of `SL_d(F_p)`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct KernelReport {
    pub p: u64,
    pub d: usize,
    /// Scalars lambda with lambda^d = 1 (these act trivially and have
    /// determinant 1).
    pub kernel_scalars: Vec<u64>,
    pub injective: bool,
}

/// Determines which scalar matrices lie in the kernel of the action and
/// verifies, for the supplied generators, that they indeed act trivially.
pub fn hom_kernel_check(
    idx: &ProjectiveIndex,
    gens: &[FpMatrix],
) -> Result<KernelReport, ProjError> {
    let p = idx.prime();
    let d = idx.dimension();
    let mut kernel_scalars = Vec::new();
    for lambda in 1..p {
        // lambda^d in F_p.
        let l = crate::fpalg::FpScalar::reduced(lambda as i64, p);
        if l.pow(d as u64).value() == 1 {
            kernel_scalars.push(lambda);
            // The scalar matrix must act trivially on the points.
            let scalar_mat = {
                let mut m = FpMatrix::zero_fp(d, p)?;
                for i in 0..d {
                    m.set(i, i, l);
                }
                m
            };
            if !idx.act(&scalar_mat)?.is_identity() {
                return Err(ProjError::CorruptCache(
                    "scalar matrix failed to act trivially".into(),
                ));
            }
        }
    }
    for g in gens {
        if g.det().is_zero() {
            return Err(ProjError::Alg(AlgError::Singular));
        }
    }
    let injective = kernel_scalars == [1];
    Ok(KernelReport {
        p,
        d,
        kernel_scalars,
        injective,
    })
}

/// Shared, optionally disk-backed store of point tables keyed by (p, d).
pub struct ProjCache {
    dir: Option<PathBuf>,
    tables: Mutex<BTreeMap<(u64, usize), Arc<ProjectiveIndex>>>,
}

impl ProjCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        ProjCache {
            dir,
            tables: Mutex::new(BTreeMap::new()),
        }
    }

    fn cache_path(dir: &Path, p: u64, d: usize) -> PathBuf {
        dir.join(format!("projective-p{p}-d{d}.tbl"))
    }

    pub fn get(&self, p: u64, d: usize) -> Result<Arc<ProjectiveIndex>, ProjError> {
        if let Some(hit) = self.tables.lock().unwrap().get(&(p, d)) {
            return Ok(Arc::clone(hit));
        }
        let table = match &self.dir {
            Some(dir) => {
                let path = Self::cache_path(dir, p, d);
                match std::fs::File::open(&path) {
                    Ok(f) => ProjectiveIndex::read_cache(std::io::BufReader::new(f))?,
                    Err(_) => {
                        let t = ProjectiveIndex::enumerate(p, d)?;
                        std::fs::create_dir_all(dir)?;
                        let f = std::fs::File::create(&path)?;
                        t.write_cache(std::io::BufWriter::new(f))?;
                        t
                    }
                }
            }
            None => ProjectiveIndex::enumerate(p, d)?,
        };
        let arc = Arc::new(table);
        self.tables.lock().unwrap().insert((p, d), Arc::clone(&arc));
        Ok(arc)
    }
}
