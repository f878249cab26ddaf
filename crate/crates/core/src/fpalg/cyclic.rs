use super::{is_prime, AlgError, FpScalar, Ring};

/// An element of the cyclic group algebra `F_p[t]/(t^N - 1)`, stored as the
/// coefficient vector of `sum c_i t^i` with `0 <= i < N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycAlgElement {
    p: u64,
    coeffs: Vec<u64>,
}

impl std::fmt::Debug for CycAlgElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut wrote = false;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                if wrote {
                    write!(f, " + ")?;
                }
                match i {
                    0 => write!(f, "{c}")?,
                    1 => write!(f, "{c}*t")?,
                    _ => write!(f, "{c}*t^{i}")?,
                }
                wrote = true;
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " (mod {}, t^{})", self.p, self.coeffs.len())
    }
}

impl CycAlgElement {
    pub fn zero_of(p: u64, n: usize) -> Result<Self, AlgError> {
        if !is_prime(p) {
            return Err(AlgError::NotPrime(p));
        }
        if n == 0 {
            return Err(AlgError::BadArgument("cyclic order N must be >= 1".into()));
        }
        Ok(CycAlgElement {
            p,
            coeffs: vec![0; n],
        })
    }

    pub fn one_of(p: u64, n: usize) -> Result<Self, AlgError> {
        let mut x = Self::zero_of(p, n)?;
        x.coeffs[0] = 1 % p;
        Ok(x)
    }

    /// The generator `t^k` (k may be negative; exponents reduce mod N).
    pub fn monomial(p: u64, n: usize, k: i64) -> Result<Self, AlgError> {
        let mut x = Self::zero_of(p, n)?;
        let idx = k.rem_euclid(n as i64) as usize;
        x.coeffs[idx] = 1 % p;
        Ok(x)
    }

    pub fn from_coeffs(p: u64, coeffs: Vec<i64>) -> Result<Self, AlgError> {
        if !is_prime(p) {
            return Err(AlgError::NotPrime(p));
        }
        if coeffs.is_empty() {
            return Err(AlgError::BadArgument("cyclic order N must be >= 1".into()));
        }
        let reduced = coeffs
            .into_iter()
            .map(|c| c.rem_euclid(p as i64) as u64)
            .collect();
        Ok(CycAlgElement { p, coeffs: reduced })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> FpScalar {
        FpScalar::reduced(self.coeffs[i] as i64, self.p)
    }

    /// Inverse via the extended Euclidean algorithm on polynomial lifts:
    /// `x` is a unit iff gcd(x, t^N - 1) = 1 in `F_p[t]`.
    fn poly_inverse(&self) -> Option<CycAlgElement> {
        let p = self.p;
        let n = self.coeffs.len();
        // Modulus polynomial t^N - 1.
        let mut modulus = vec![0i64; n + 1];
        modulus[0] = -1;
        modulus[n] = 1;
        let modulus: Vec<u64> = modulus
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();

        let lift: Vec<u64> = self.coeffs.clone();
        let (g, _, v) = poly_ext_gcd(&modulus, &lift, p);
        // Unit iff the gcd is a nonzero constant.
        if poly_degree(&g) != Some(0) {
            return None;
        }
        let c = FpScalar::reduced(g[0] as i64, p);
        let c_inv = c.inv()?;
        let mut out = vec![0u64; n];
        for (i, &coef) in v.iter().enumerate() {
            if coef != 0 {
                let idx = i % n;
                out[idx] = (out[idx] + coef * c_inv.value()) % p;
            }
        }
        Some(CycAlgElement { p, coeffs: out })
    }
}

fn poly_degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Extended gcd over `F_p[x]`: returns (g, u, v) with u*a + v*b = g.
fn poly_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    let mut u0 = vec![1u64];
    let mut u1 = vec![0u64];
    let mut v0 = vec![0u64];
    let mut v1 = vec![1u64];
    while poly_degree(&r1).is_some() {
        let (q, rem) = poly_divmod(&r0, &r1, p);
        let nu = poly_sub(&u0, &poly_mul(&q, &u1, p), p);
        let nv = poly_sub(&v0, &poly_mul(&q, &v1, p), p);
        r0 = std::mem::replace(&mut r1, rem);
        u0 = std::mem::replace(&mut u1, nu);
        v0 = std::mem::replace(&mut v1, nv);
    }
    (r0, u0, v0)
}

fn poly_divmod(num: &[u64], den: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dd = poly_degree(den).expect("division by zero polynomial");
    let lead_inv = FpScalar::reduced(den[dd] as i64, p).inv().unwrap().value();
    let mut rem = num.to_vec();
    let nd = match poly_degree(&rem) {
        Some(d) if d >= dd => d,
        _ => return (vec![0], rem),
    };
    let mut quot = vec![0u64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let d = k + dd;
        let c = (rem.get(d).copied().unwrap_or(0) * lead_inv) % p;
        if c == 0 {
            continue;
        }
        quot[k] = c;
        for (i, &dc) in den.iter().enumerate() {
            if dc != 0 {
                let idx = k + i;
                rem[idx] = (rem[idx] + p * p - (c * dc) % p) % p;
            }
        }
    }
    (quot, rem)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
    }
    out
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y % p) % p;
    }
    out
}

impl Ring for CycAlgElement {
    fn zero(&self) -> Self {
        CycAlgElement {
            p: self.p,
            coeffs: vec![0; self.coeffs.len()],
        }
    }

    fn one(&self) -> Self {
        let mut x = self.zero();
        x.coeffs[0] = 1 % self.p;
        x
    }

    fn add(&self, rhs: &Self) -> Self {
        debug_assert!(self.same_ring(rhs));
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        CycAlgElement { p: self.p, coeffs }
    }

    fn sub(&self, rhs: &Self) -> Self {
        debug_assert!(self.same_ring(rhs));
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(&a, &b)| (a + self.p - b) % self.p)
            .collect();
        CycAlgElement { p: self.p, coeffs }
    }

    fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| (self.p - a) % self.p).collect();
        CycAlgElement { p: self.p, coeffs }
    }

    fn mul(&self, rhs: &Self) -> Self {
        debug_assert!(self.same_ring(rhs));
        let n = self.coeffs.len();
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b != 0 {
                    let k = (i + j) % n;
                    out[k] = (out[k] + a * b) % self.p;
                }
            }
        }
        CycAlgElement {
            p: self.p,
            coeffs: out,
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn inverse(&self) -> Option<Self> {
        self.poly_inverse()
    }

    fn same_ring(&self, rhs: &Self) -> bool {
        self.p == rhs.p && self.coeffs.len() == rhs.coeffs.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_arithmetic() {
        let t = CycAlgElement::monomial(3, 3, 1).unwrap();
        let t_inv = CycAlgElement::monomial(3, 3, -1).unwrap();
        assert_eq!(t.mul(&t_inv), CycAlgElement::one_of(3, 3).unwrap());
        // t^3 = 1 in F_3[t]/(t^3 - 1).
        assert_eq!(t.mul(&t).mul(&t), t.one());
    }

    #[test]
    fn cube_plus_one_collapses() {
        // t^3 + 1 = 2 in F_3 C_3.
        let t = CycAlgElement::monomial(3, 3, 1).unwrap();
        let lhs = t.mul(&t).mul(&t).add(&t.one());
        let two = CycAlgElement::from_coeffs(3, vec![2, 0, 0]).unwrap();
        assert_eq!(lhs, two);
    }

    #[test]
    fn units_and_non_units() {
        // t is a unit; 1 + t + t^2 annihilates (t - 1) in F_3 C_3, so it is not.
        let t = CycAlgElement::monomial(3, 3, 1).unwrap();
        assert!(t.inverse().is_some());
        let s = CycAlgElement::from_coeffs(3, vec![1, 1, 1]).unwrap();
        assert!(s.inverse().is_none());
        // Random-ish units: x * x^{-1} = 1.
        for c in [vec![1, 1, 0], vec![2, 0, 1], vec![1, 2, 2]] {
            let x = CycAlgElement::from_coeffs(3, c).unwrap();
            if let Some(y) = x.inverse() {
                assert_eq!(x.mul(&y), x.one());
            }
        }
    }
}
