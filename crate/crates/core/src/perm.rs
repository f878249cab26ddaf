//! Permutations on `[0, u)` with cycle tooling.
//!
//! One convention holds everywhere in this crate: actions are written
//! left-to-right, `i^(gh) = (i^g)^h`, and conjugation is `g^s = s^{-1} g s`.
//! Permutations store the image array (`images[i] = i^g`) as `u32`, which
//! comfortably covers the supported degree bound of `2^20`.

use num_bigint::BigUint;
use num_integer::Integer;
use thiserror::Error;

/// Hard cap on supported degree; flat image arrays stay cheap below this.
pub const MAX_DEGREE: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("image array is not a bijection")]
    NotBijective,
    #[error("degree {0} exceeds supported bound {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn xor(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A bijection on `[0, degree)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<u32>,
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Permutation({})", self.to_cycle_string())
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        if images.len() > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(images.len()));
        }
        let mut seen = vec![false; images.len()];
        for &im in &images {
            let idx = im as usize;
            if idx >= images.len() || seen[idx] {
                return Err(PermError::NotBijective);
            }
            seen[idx] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds the permutation from disjoint cycles over `[0, degree)`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for w in cycle.windows(2) {
                let (a, b) = (w[0] as usize, w[1] as usize);
                if a >= degree || b >= degree {
                    return Err(PermError::Parse(format!("point out of range in {cycle:?}")));
                }
                images[a] = w[1];
            }
            if cycle.len() > 1 {
                images[*cycle.last().unwrap() as usize] = cycle[0];
            }
        }
        Self::from_images(images)
    }

    /// Transposition of two points.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Result<Self, PermError> {
        Self::from_cycles(degree, &[vec![a as u32, b as u32]])
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &im)| i as u32 == im)
    }

    /// Left-to-right composition: `i^(self . rhs) = (i^self)^rhs`.
    pub fn compose(&self, rhs: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != rhs.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: rhs.degree(),
            });
        }
        let images = self
            .images
            .iter()
            .map(|&i| rhs.images[i as usize])
            .collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        Permutation { images }
    }

    /// `self^s = s^{-1} self s`.
    pub fn conjugate(&self, s: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != s.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: s.degree(),
            });
        }
        // (s^{-1} g s)[i] computed directly: i -> s^{-1}(i) -> g -> s.
        let s_inv = s.inverse();
        let mut images = vec![0u32; self.images.len()];
        for i in 0..self.images.len() {
            images[i] = s.images[self.images[s_inv.images[i] as usize] as usize];
        }
        Ok(Permutation { images })
    }

    pub fn pow(&self, e: u64) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).unwrap();
            }
            base = base.compose(&base).unwrap();
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles of length >= 2, each rotated so its minimum comes
    /// first, sorted by minimum element. Fixed points are omitted.
    pub fn cycle_decomposition(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut cur = self.images[start] as usize;
            while cur != start {
                seen[cur] = true;
                cycle.push(cur as u32);
                cur = self.images[cur] as usize;
            }
            cycles.push(cycle);
        }
        // Scanning from 0 already yields min-first rotations in min order.
        cycles
    }

    pub fn parity(&self) -> Parity {
        let mut transpositions = 0usize;
        let n = self.images.len();
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                len += 1;
                cur = self.images[cur] as usize;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn fixed_points(&self) -> Vec<u32> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &im)| i as u32 == im)
            .map(|(i, _)| i as u32)
            .collect()
    }

    pub fn count_fixed(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &im)| i as u32 == im)
            .count()
    }

    pub fn moved_points(&self) -> Vec<u32> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &im)| i as u32 != im)
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// Order as lcm of cycle lengths (arbitrary precision; random long
    /// permutations can have astronomically large orders).
    pub fn order(&self) -> BigUint {
        let mut ord = BigUint::from(1u32);
        let n = self.images.len();
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                len += 1;
                cur = self.images[cur] as usize;
            }
            ord = ord.lcm(&BigUint::from(len));
        }
        ord
    }

    /// Disjoint-cycle text form, e.g. `(0 1 2)(3 4)`; identity prints `()`.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycle_decomposition();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut out = String::new();
        for cycle in cycles {
            out.push('(');
            for (k, pt) in cycle.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(&pt.to_string());
            }
            out.push(')');
        }
        out
    }

    /// Parses disjoint-cycle notation over `[0, degree)`.
    pub fn parse_cycle_string(degree: usize, text: &str) -> Result<Self, PermError> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(PermError::Parse(format!("expected '(' at {rest:?}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| PermError::Parse("unbalanced parenthesis".into()))?;
            let body = &rest[1..close];
            let mut cycle = Vec::new();
            for tok in body.split_whitespace() {
                let pt: u32 = tok
                    .parse()
                    .map_err(|_| PermError::Parse(format!("bad point {tok:?}")))?;
                if cycle.contains(&pt) {
                    return Err(PermError::Parse(format!("repeated point {pt}")));
                }
                cycle.push(pt);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = rest[close + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles)
    }

    /// Raw image-array text form: one integer per line.
    pub fn to_image_lines(&self) -> String {
        let mut out = String::new();
        for &im in &self.images {
            out.push_str(&im.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_image_lines(text: &str) -> Result<Self, PermError> {
        let mut images = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v: u32 = line
                .parse()
                .map_err(|_| PermError::Parse(format!("bad image {line:?}")))?;
            images.push(v);
        }
        Self::from_images(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, cycles: &str) -> Permutation {
        Permutation::parse_cycle_string(degree, cycles).unwrap()
    }

    #[test]
    fn compose_convention() {
        let g = perm(3, "(0 1)");
        let h = perm(3, "(1 2)");
        // Left-to-right: 0 -> 1 -> 2, 2 -> 2 -> 1, 1 -> 0 -> 0.
        let gh = g.compose(&h).unwrap();
        assert_eq!(gh, perm(3, "(0 2 1)"));
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
    }

    #[test]
    fn compose_degree_mismatch() {
        let g = perm(3, "(0 1)");
        let h = perm(4, "(0 1)");
        assert!(matches!(
            g.compose(&h),
            Err(PermError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn conjugation_matches_definition() {
        let g = perm(5, "(0 1 2)");
        let s = perm(5, "(0 3)(1 4)");
        let direct = g.conjugate(&s).unwrap();
        let manual = s.inverse().compose(&g).unwrap().compose(&s).unwrap();
        assert_eq!(direct, manual);
        // Conjugation preserves cycle type.
        let lens: Vec<usize> = direct
            .cycle_decomposition()
            .iter()
            .map(|c| c.len())
            .collect();
        assert_eq!(lens, vec![3]);
    }

    #[test]
    fn cycle_decomposition_canonical() {
        assert!(Permutation::identity(6).cycle_decomposition().is_empty());
        let g = perm(6, "(3 4)(0 1 2)");
        let cycles = g.cycle_decomposition();
        assert_eq!(cycles, vec![vec![0, 1, 2], vec![3, 4]]);
    }

    #[test]
    fn parity_cases() {
        assert_eq!(Permutation::identity(5).parity(), Parity::Even);
        assert_eq!(perm(5, "(0 1)").parity(), Parity::Odd);
        assert_eq!(perm(5, "(0 1 2)").parity(), Parity::Even);
        let g = perm(7, "(0 1)(2 3 4)");
        let h = perm(7, "(5 6)");
        assert_eq!(g.compose(&h).unwrap().parity(), g.parity().xor(h.parity()));
    }

    #[test]
    fn fixed_points_and_order() {
        assert_eq!(Permutation::identity(5).fixed_points(), vec![0, 1, 2, 3, 4]);
        let g = perm(6, "(0 1 2)(3 4)");
        assert_eq!(g.fixed_points(), vec![5]);
        assert_eq!(g.order(), BigUint::from(6u32));
    }

    #[test]
    fn text_round_trips() {
        let g = perm(9, "(0 4 2)(5 7)");
        assert_eq!(
            Permutation::parse_cycle_string(9, &g.to_cycle_string()).unwrap(),
            g
        );
        assert_eq!(
            Permutation::parse_image_lines(&g.to_image_lines()).unwrap(),
            g
        );
        assert_eq!(Permutation::identity(4).to_cycle_string(), "()");
        assert_eq!(
            Permutation::parse_cycle_string(4, "()").unwrap(),
            Permutation::identity(4)
        );
    }

    #[test]
    fn bijection_validation() {
        assert!(matches!(
            Permutation::from_images(vec![0, 0, 1]),
            Err(PermError::NotBijective)
        ));
        assert!(matches!(
            Permutation::from_images(vec![0, 3, 1]),
            Err(PermError::NotBijective)
        ));
    }
}
