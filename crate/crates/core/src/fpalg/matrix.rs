use super::{AlgError, FpScalar, Ring};

/// Which flavor of elementary matrix to build.
///
/// `RingForm` is the bare `E_{i,j}(r)` (single entry, zero elsewhere);
/// `GroupForm` is `I + E_{i,j}(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementaryForm {
    RingForm,
    GroupForm,
}

/// Dense square matrix over a coefficient ring, row-major storage.
///
/// All row/column indices in this API are 0-based: the classical
/// `e_{i,j}` with 1-based subscripts is `elementary(d, i-1, j-1, ..)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    size: usize,
    entries: Vec<R>,
}

/// Matrices over a prime field; the workhorse type.
pub type FpMatrix = Matrix<FpScalar>;

impl<R: Ring> std::fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.size, self.size)?;
        for i in 0..self.size {
            write!(f, "  ")?;
            for j in 0..self.size {
                write!(f, "{:?} ", self.entries[i * self.size + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<R: Ring> Matrix<R> {
    /// Zero matrix; `exemplar` fixes the coefficient ring.
    pub fn zero(size: usize, exemplar: &R) -> Self {
        Matrix {
            size,
            entries: vec![exemplar.zero(); size * size],
        }
    }

    pub fn identity(size: usize, exemplar: &R) -> Self {
        let mut m = Self::zero(size, exemplar);
        for i in 0..size {
            m.entries[i * size + i] = exemplar.one();
        }
        m
    }

    pub fn from_entries(size: usize, entries: Vec<R>) -> Result<Self, AlgError> {
        if entries.len() != size * size {
            return Err(AlgError::BadArgument(format!(
                "expected {} entries for a {size}x{size} matrix, got {}",
                size * size,
                entries.len()
            )));
        }
        for w in entries.windows(2) {
            if !w[0].same_ring(&w[1]) {
                return Err(AlgError::RingMismatch);
            }
        }
        Ok(Matrix { size, entries })
    }

    /// `E_{i,j}(r)` or `I + E_{i,j}(r)`; group form requires `i != j`.
    pub fn elementary(
        size: usize,
        i: usize,
        j: usize,
        r: R,
        form: ElementaryForm,
    ) -> Result<Self, AlgError> {
        if i >= size || j >= size {
            return Err(AlgError::BadArgument(format!(
                "entry ({i},{j}) outside a {size}x{size} matrix"
            )));
        }
        if form == ElementaryForm::GroupForm && i == j {
            return Err(AlgError::BadArgument(
                "group-form elementary matrix needs off-diagonal position".into(),
            ));
        }
        let mut m = match form {
            ElementaryForm::RingForm => Self::zero(size, &r),
            ElementaryForm::GroupForm => Self::identity(size, &r),
        };
        let cur = m.entries[i * size + j].clone();
        m.entries[i * size + j] = cur.add(&r);
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.entries[i * self.size + j] = v;
    }

    pub fn exemplar(&self) -> &R {
        &self.entries[0]
    }

    pub fn is_identity(&self) -> bool {
        let n = self.size;
        self.entries.iter().enumerate().all(|(k, e)| {
            if k / n == k % n {
                *e == e.one()
            } else {
                e.is_zero()
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn check_compatible(&self, rhs: &Self) -> Result<(), AlgError> {
        if self.size != rhs.size {
            return Err(AlgError::DimensionMismatch {
                left: self.size,
                right: rhs.size,
            });
        }
        if !self.entries[0].same_ring(&rhs.entries[0]) {
            return Err(AlgError::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.check_compatible(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(Matrix {
            size: self.size,
            entries,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.check_compatible(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        Ok(Matrix {
            size: self.size,
            entries,
        })
    }

    pub fn neg(&self) -> Self {
        Matrix {
            size: self.size,
            entries: self.entries.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgError> {
        self.check_compatible(rhs)?;
        let n = self.size;
        let zero = self.entries[0].zero();
        let mut out = vec![zero; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] = out[i * n + j].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(Matrix {
            size: n,
            entries: out,
        })
    }

    pub fn pow(&self, mut e: u64) -> Result<Self, AlgError> {
        let mut acc = Self::identity(self.size, &self.entries[0]);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entries[j * n + i].clone());
            }
        }
        Matrix { size: n, entries }
    }

    /// Copies `block` into the square region with top-left corner (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        let b = block.size;
        for i in 0..b {
            for j in 0..b {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Determinant by cofactor expansion; exact over any commutative ring
    /// but only sensible for tiny sizes. Group-algebra matrices show up at
    /// size 3 only, so sizes above 4 are rejected.
    pub fn det_cofactor(&self) -> Result<R, AlgError> {
        if self.size > 4 {
            return Err(AlgError::Unsupported(
                "cofactor determinant limited to size <= 4".into(),
            ));
        }
        Ok(self.det_cofactor_rec())
    }

    fn det_cofactor_rec(&self) -> R {
        let n = self.size;
        if n == 1 {
            return self.entries[0].clone();
        }
        let zero = self.entries[0].zero();
        let mut acc = zero.clone();
        for j in 0..n {
            let a = &self.entries[j];
            if a.is_zero() {
                continue;
            }
            let minor = self.minor(0, j);
            let term = a.mul(&minor.det_cofactor_rec());
            acc = if j % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.size;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j != col {
                    entries.push(self.entries[i * n + j].clone());
                }
            }
        }
        Matrix {
            size: n - 1,
            entries,
        }
    }

    /// Inverse by the adjugate; same size limitation as `det_cofactor`.
    pub fn inv_cofactor(&self) -> Result<Self, AlgError> {
        let det = self.det_cofactor()?;
        let det_inv = det.inverse().ok_or(AlgError::Singular)?;
        let n = self.size;
        let mut out = Self::zero(n, &self.entries[0]);
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(j, i).det_cofactor_rec();
                let signed = if (i + j) % 2 == 0 { cof } else { cof.neg() };
                out.set(i, j, signed.mul(&det_inv));
            }
        }
        Ok(out)
    }
}

impl FpMatrix {
    pub fn zero_fp(size: usize, p: u64) -> Result<Self, AlgError> {
        Ok(Self::zero(size, &FpScalar::new(0, p)?))
    }

    pub fn identity_fp(size: usize, p: u64) -> Result<Self, AlgError> {
        Ok(Self::identity(size, &FpScalar::new(0, p)?))
    }

    /// Builds a matrix from rows of integers, reducing mod p.
    pub fn from_rows(rows: &[Vec<i64>], p: u64) -> Result<Self, AlgError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(AlgError::BadArgument("matrix rows must be square".into()));
            }
            for &v in row {
                entries.push(FpScalar::new(v, p)?);
            }
        }
        Self::from_entries(size, entries)
    }

    pub fn elementary_fp(
        size: usize,
        i: usize,
        j: usize,
        r: i64,
        p: u64,
        form: ElementaryForm,
    ) -> Result<Self, AlgError> {
        Self::elementary(size, i, j, FpScalar::new(r, p)?, form)
    }

    pub fn modulus(&self) -> u64 {
        self.exemplar().modulus()
    }

    /// Determinant by Gaussian elimination with exact field arithmetic.
    pub fn det(&self) -> FpScalar {
        let n = self.size;
        let mut m = self.entries.clone();
        let one = self.exemplar().one();
        let mut det = one;
        let mut sign_flip = false;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r * n + col].is_zero());
            let Some(pr) = pivot else {
                return self.exemplar().zero();
            };
            if pr != col {
                for j in 0..n {
                    m.swap(pr * n + j, col * n + j);
                }
                sign_flip = !sign_flip;
            }
            let pv = m[col * n + col];
            det = det.mul(&pv);
            let pv_inv = pv.inv().expect("nonzero field element");
            for r in col + 1..n {
                let factor = m[r * n + col].mul(&pv_inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = factor.mul(&m[col * n + j]);
                    m[r * n + j] = m[r * n + j].sub(&sub);
                }
            }
        }
        if sign_flip {
            det.neg()
        } else {
            det
        }
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inv(&self) -> Result<Self, AlgError> {
        let n = self.size;
        let mut m = self.entries.clone();
        let mut out = Self::identity(n, self.exemplar());
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r * n + col].is_zero());
            let Some(pr) = pivot else {
                return Err(AlgError::Singular);
            };
            if pr != col {
                for j in 0..n {
                    m.swap(pr * n + j, col * n + j);
                    out.entries.swap(pr * n + j, col * n + j);
                }
            }
            let pv_inv = m[col * n + col].inv().expect("nonzero field element");
            for j in 0..n {
                m[col * n + j] = m[col * n + j].mul(&pv_inv);
                out.entries[col * n + j] = out.entries[col * n + j].mul(&pv_inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m[r * n + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let s = factor.mul(&m[col * n + j]);
                    m[r * n + j] = m[r * n + j].sub(&s);
                    let s2 = factor.mul(&out.entries[col * n + j]);
                    out.entries[r * n + j] = out.entries[r * n + j].sub(&s2);
                }
            }
        }
        Ok(out)
    }
}

/// Additive commutator `xy - yx`.
pub fn ring_commutator<R: Ring>(x: &Matrix<R>, y: &Matrix<R>) -> Result<Matrix<R>, AlgError> {
    x.mul(y)?.sub(&y.mul(x)?)
}

/// Multiplicative commutator `x^{-1} y^{-1} x y`.
///
/// Over a prime field any size works; over other coefficient rings the
/// inputs must be small enough for the adjugate inverse.
pub fn group_commutator<R: Ring>(x: &Matrix<R>, y: &Matrix<R>) -> Result<Matrix<R>, AlgError> {
    let xi = x.inv_any()?;
    let yi = y.inv_any()?;
    xi.mul(&yi)?.mul(x)?.mul(y)
}

impl<R: Ring> Matrix<R> {
    /// Inverse that dispatches to the adjugate for generic rings.
    fn inv_any(&self) -> Result<Self, AlgError> {
        self.inv_cofactor()
    }
}

impl FpMatrix {
    /// Field matrices bypass the size restriction by shadowing through
    /// Gauss-Jordan.
    pub fn group_commutator_with(&self, y: &FpMatrix) -> Result<FpMatrix, AlgError> {
        let xi = self.inv()?;
        let yi = y.inv()?;
        xi.mul(&yi)?.mul(self)?.mul(y)
    }
}
