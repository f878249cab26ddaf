use super::{is_prime, AlgError, Ring};

/// A residue in the prime field `F_p`, stored in least-nonnegative form.
///
/// `p = 2` is accepted here for generality; callers that need an odd prime
/// (the projective-pair construction does) validate separately.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    p: u64,
    value: u64,
}

impl std::fmt::Debug for FpScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl FpScalar {
    pub fn new(value: i64, p: u64) -> Result<Self, AlgError> {
        if !is_prime(p) {
            return Err(AlgError::NotPrime(p));
        }
        Ok(Self::reduced(value, p))
    }

    /// Internal constructor skipping the primality check; `p` must already
    /// be validated.
    pub(crate) fn reduced(value: i64, p: u64) -> Self {
        let m = p as i64;
        let v = value.rem_euclid(m) as u64;
        FpScalar { p, value: v }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn inv(&self) -> Option<FpScalar> {
        if self.value == 0 {
            return None;
        }
        // Fermat: value^(p-2) mod p.
        Some(self.pow(self.p - 2))
    }

    pub fn pow(&self, mut e: u64) -> FpScalar {
        let mut base = *self;
        let mut acc = FpScalar {
            p: self.p,
            value: 1 % self.p,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for FpScalar {
    fn zero(&self) -> Self {
        FpScalar {
            p: self.p,
            value: 0,
        }
    }

    fn one(&self) -> Self {
        FpScalar {
            p: self.p,
            value: 1 % self.p,
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar {
            p: self.p,
            value: (self.value + rhs.value) % self.p,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar {
            p: self.p,
            value: (self.p + self.value - rhs.value) % self.p,
        }
    }

    fn neg(&self) -> Self {
        FpScalar {
            p: self.p,
            value: (self.p - self.value) % self.p,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FpScalar {
            p: self.p,
            value: (self.value * rhs.value) % self.p,
        }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn inverse(&self) -> Option<Self> {
        self.inv()
    }

    fn same_ring(&self, rhs: &Self) -> bool {
        self.p == rhs.p
    }
}
