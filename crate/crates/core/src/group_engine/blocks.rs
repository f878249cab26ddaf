//! Block systems of transitive permutation groups.
//!
//! `minimal_blocks` computes the finest G-congruence identifying a given
//! pair of points (union-find over generator images); a transitive group is
//! primitive iff that congruence is trivial for every pair {0, x}.

use super::{check_degrees, is_transitive, EngineError};
use crate::perm::Permutation;
use rayon::prelude::*;

/// A partition of the point set into blocks of equal size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    /// block_of[point] = block id in `0..num_blocks`.
    pub block_of: Vec<u32>,
    pub num_blocks: usize,
}

impl BlockSystem {
    pub fn block_size(&self) -> usize {
        self.block_of.len() / self.num_blocks
    }

    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.num_blocks];
        for (pt, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(pt as u32);
        }
        out
    }
}

/// Outcome of the minimal-block computation for one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockVerdict {
    /// The only congruence identifying the pair is the trivial one.
    PrimitiveForPair,
    /// A proper nontrivial block system; the pair shares a block.
    System(BlockSystem),
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    /// Exemplar point of each class, tracked for image propagation.
    rep: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            rep: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    /// Unites the classes of x and y; returns the exemplars of the two old
    /// classes when a merge actually happened.
    fn union(&mut self, x: u32, y: u32) -> Option<(u32, u32)> {
        let rx = self.find(x);
        let ry = self.find(y);
        if rx == ry {
            return None;
        }
        let (big, small) = if self.size[rx as usize] >= self.size[ry as usize] {
            (rx, ry)
        } else {
            (ry, rx)
        };
        let reps = (self.rep[big as usize], self.rep[small as usize]);
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
        Some(reps)
    }
}

/// Finest block system in which `a` and `b` share a block.
pub fn minimal_blocks(gens: &[Permutation], a: usize, b: usize) -> BlockVerdict {
    let degree = gens[0].degree();
    let mut uf = UnionFind::new(degree);
    let mut classes = degree;
    let mut queue: Vec<(u32, u32)> = vec![(a as u32, b as u32)];
    while let Some((x, y)) = queue.pop() {
        if let Some((rx, ry)) = uf.union(x, y) {
            classes -= 1;
            if classes == 1 {
                // Everything collapsed: only the trivial congruence
                // identifies the pair.
                return BlockVerdict::PrimitiveForPair;
            }
            for g in gens {
                queue.push((g.apply(rx as usize) as u32, g.apply(ry as usize) as u32));
            }
        }
    }
    let mut block_of = vec![u32::MAX; degree];
    let mut num_blocks = 0u32;
    let mut root_label = vec![u32::MAX; degree];
    for (pt, slot) in block_of.iter_mut().enumerate() {
        let r = uf.find(pt as u32) as usize;
        if root_label[r] == u32::MAX {
            root_label[r] = num_blocks;
            num_blocks += 1;
        }
        *slot = root_label[r];
    }
    if num_blocks == 1 {
        BlockVerdict::PrimitiveForPair
    } else {
        BlockVerdict::System(BlockSystem {
            block_of,
            num_blocks: num_blocks as usize,
        })
    }
}

/// Minimal block system containing the given pair, for a transitive group.
pub fn find_blocks(
    gens: &[Permutation],
    pair: (usize, usize),
) -> Result<BlockVerdict, EngineError> {
    check_degrees(gens)?;
    let (transitive, orbit) = is_transitive(gens)?;
    if !transitive {
        return Err(EngineError::Intransitive {
            orbit_size: orbit.len(),
        });
    }
    Ok(minimal_blocks(gens, pair.0, pair.1))
}

/// Primitivity by exhausting the pairs {0, x}: every nontrivial congruence
/// of a transitive group identifies 0 with some other point, so this is a
/// complete test, not a sample. Returns the first nontrivial system found.
pub fn is_primitive(gens: &[Permutation]) -> Result<Result<(), BlockSystem>, EngineError> {
    let degree = check_degrees(gens)?;
    let (transitive, orbit) = is_transitive(gens)?;
    if !transitive {
        return Err(EngineError::Intransitive {
            orbit_size: orbit.len(),
        });
    }
    let witness = (1..degree)
        .into_par_iter()
        .filter_map(|x| match minimal_blocks(gens, 0, x) {
            BlockVerdict::PrimitiveForPair => None,
            BlockVerdict::System(sys) => Some((x, sys)),
        })
        .min_by_key(|(x, _)| *x);
    Ok(match witness {
        None => Ok(()),
        Some((_, sys)) => Err(sys),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(degree: usize, cycles: &str) -> Permutation {
        Permutation::parse_cycle_string(degree, cycles).unwrap()
    }

    #[test]
    fn cyclic_four_blocks() {
        // <(0 1 2 3)> with pair {0, 2}: blocks {{0,2},{1,3}}.
        let gens = [perm(4, "(0 1 2 3)")];
        match find_blocks(&gens, (0, 2)).unwrap() {
            BlockVerdict::System(sys) => {
                assert_eq!(sys.num_blocks, 2);
                assert_eq!(sys.blocks(), vec![vec![0, 2], vec![1, 3]]);
            }
            other => panic!("expected a block system, got {other:?}"),
        }
        // Pair {0, 1} collapses everything.
        assert_eq!(
            find_blocks(&gens, (0, 1)).unwrap(),
            BlockVerdict::PrimitiveForPair
        );
    }

    #[test]
    fn alt5_is_primitive_for_every_pair() {
        let gens = [perm(5, "(0 1 2)"), perm(5, "(2 3 4)")];
        for x in 1..5 {
            assert_eq!(minimal_blocks(&gens, 0, x), BlockVerdict::PrimitiveForPair);
        }
        assert!(is_primitive(&gens).unwrap().is_ok());
    }

    #[test]
    fn intransitive_input_is_rejected() {
        let gens = [perm(4, "(0 1)")];
        assert!(matches!(
            find_blocks(&gens, (0, 1)),
            Err(EngineError::Intransitive { .. })
        ));
    }

    #[test]
    fn imprimitive_witness_is_found() {
        let gens = [perm(4, "(0 1 2 3)")];
        let sys = is_primitive(&gens).unwrap().unwrap_err();
        assert_eq!(sys.num_blocks, 2);
        assert_eq!(sys.block_size(), 2);
    }
}
