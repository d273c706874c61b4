//! Geodesics in the Cayley graph and non-crossing partitions.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::canonical::gamma;
use super::perm::{Permutation, SymmetricGroup};
use crate::error::{Error, Result};

/// `|a| + d(a, target) == |target|`.
pub fn is_geodesic(a: &Permutation, target: &Permutation) -> Result<bool> {
    Ok(a.length() + a.distance(target)? == target.length())
}

/// All points on a geodesic `id -> target`, streamed in lexicographic order.
pub fn enumerate_geodesics(target: &Permutation) -> impl Iterator<Item = Permutation> + '_ {
    let len = target.length();
    SymmetricGroup::new(target.size())
        .filter(move |a| a.length() + a.distance(target).expect("same size") == len)
}

pub fn catalan(p: usize) -> u64 {
    // C_p = binom(2p, p) / (p + 1), built incrementally to stay in range.
    let mut c: u64 = 1;
    for i in 0..p as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// A non-crossing partition of `{1..p}`, stored 0-based with sorted blocks
/// sorted by their least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NonCrossingPartition {
    p: usize,
    blocks: Vec<Vec<usize>>,
}

impl NonCrossingPartition {
    pub fn new(p: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        let mut owner = vec![usize::MAX; p];
        for (bi, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= p || owner[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("{blocks:?} is not a partition of {p}")));
                }
                owner[x] = bi;
            }
        }
        if owner.contains(&usize::MAX) {
            return Err(Error::InvalidPartition(format!("{blocks:?} does not cover {p}")));
        }
        // a < b < c < d with a, c in one block and b, d in another.
        for a in 0..p {
            for b in a + 1..p {
                if owner[a] == owner[b] {
                    continue;
                }
                for c in b + 1..p {
                    if owner[c] != owner[a] {
                        continue;
                    }
                    if (c + 1..p).any(|d| owner[d] == owner[b]) {
                        return Err(Error::InvalidPartition(format!("{blocks:?} is crossing")));
                    }
                }
            }
        }
        Ok(Self { p, blocks })
    }

    pub fn singletons(p: usize) -> Self {
        Self { p, blocks: (0..p).map(|i| vec![i]).collect() }
    }

    pub fn one_block(p: usize) -> Self {
        Self { p, blocks: if p == 0 { vec![] } else { vec![(0..p).collect()] } }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes, in block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn is_finer(&self, other: &Self) -> bool {
        let mut owner = vec![0; self.p];
        for (bi, b) in other.blocks.iter().enumerate() {
            for &x in b {
                owner[x] = bi;
            }
        }
        self.p == other.p && self.blocks.iter().all(|b| b.iter().all(|&x| owner[x] == owner[b[0]]))
    }

    /// Geodesic permutation under `γ = (p .. 1)`: each block `b1 < .. < bm`
    /// becomes the cycle `bm -> b(m-1) -> .. -> b1 -> bm`.
    pub fn to_permutation(&self) -> Permutation {
        let cycles: Vec<Vec<usize>> = self.blocks.iter().map(|b| b.iter().rev().copied().collect()).collect();
        Permutation::from_cycles(self.p, &cycles).expect("blocks form a partition")
    }

    /// Kreweras complement, computed as `α ↦ α⁻¹γ` on the geodesic side.
    pub fn kreweras(&self) -> Self {
        let a = self.to_permutation();
        let k = a.inverse().compose(&gamma(self.p.max(1))).expect("same size");
        perm_to_nc(&k, self.p).expect("Kreweras complement of a geodesic is geodesic")
    }

    /// Rotation `i -> i+1 mod p`.
    pub fn rotate(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&x| (x + 1) % self.p).collect()).collect();
        Self::new(self.p, blocks).expect("rotation preserves non-crossing")
    }

    /// All of `NC(p)`, obtained by filtering geodesics to the full cycle.
    pub fn enumerate(p: usize) -> Vec<Self> {
        if p == 0 {
            return vec![Self::singletons(0)];
        }
        let g = gamma(p);
        enumerate_geodesics(&g).map(|a| perm_to_nc(&a, p).expect("geodesic")).collect()
    }
}

pub fn perm_to_nc(a: &Permutation, p: usize) -> Result<NonCrossingPartition> {
    if a.size() != p {
        return Err(Error::SizeMismatch { left: a.size(), right: p });
    }
    if p > 0 && !is_geodesic(a, &gamma(p))? {
        return Err(Error::NotGeodesic);
    }
    NonCrossingPartition::new(p, a.cycles())
}

pub fn nc_to_perm(pi: &NonCrossingPartition) -> Permutation {
    pi.to_permutation()
}

/// Renders 1-based blocks, e.g. `{1,3}{2}`.
impl fmt::Display for NonCrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "{{")?;
            for (i, x) in b.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_numbers() {
        let known = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        for (p, &c) in known.iter().enumerate() {
            assert_eq!(catalan(p), c);
        }
    }

    #[test]
    fn geodesic_examples() {
        assert!(is_geodesic(&Permutation::identity(4), &gamma(4)).unwrap());
        assert!(is_geodesic(&gamma(4), &gamma(4)).unwrap());
        let t = Permutation::parse_cycles("(1 2)", 4).unwrap();
        assert!(is_geodesic(&t, &gamma(4)).unwrap());
        assert_eq!(t.distance(&gamma(4)).unwrap(), 2);
        let g2: Vec<_> = enumerate_geodesics(&gamma(2)).collect();
        assert_eq!(g2, vec![Permutation::identity(2), Permutation::parse_cycles("(1 2)", 2).unwrap()]);
        assert_eq!(enumerate_geodesics(&gamma(3)).count(), 5);
        assert_eq!(enumerate_geodesics(&gamma(4)).count(), 14);
    }

    #[test]
    fn crossing_rejected() {
        assert!(NonCrossingPartition::new(4, vec![vec![0, 2], vec![1, 3]]).is_err());
        assert!(NonCrossingPartition::new(4, vec![vec![0, 3], vec![1, 2]]).is_ok());
        assert!(NonCrossingPartition::new(3, vec![vec![0, 1]]).is_err());
        let crossing = Permutation::parse_cycles("(3 1)(4 2)", 4).unwrap();
        assert_eq!(perm_to_nc(&crossing, 4), Err(Error::NotGeodesic));
    }

    #[test]
    fn endpoints_and_round_trip() {
        for p in 1..=6 {
            assert_eq!(perm_to_nc(&Permutation::identity(p), p).unwrap(), NonCrossingPartition::singletons(p));
            assert_eq!(perm_to_nc(&gamma(p), p).unwrap(), NonCrossingPartition::one_block(p));
            for a in enumerate_geodesics(&gamma(p)) {
                let pi = perm_to_nc(&a, p).unwrap();
                assert_eq!(nc_to_perm(&pi), a);
            }
        }
    }

    #[test]
    fn kreweras_properties() {
        for p in 1..=6 {
            assert_eq!(NonCrossingPartition::singletons(p).kreweras(), NonCrossingPartition::one_block(p));
            assert_eq!(NonCrossingPartition::one_block(p).kreweras(), NonCrossingPartition::singletons(p));
            for pi in NonCrossingPartition::enumerate(p) {
                let k = pi.kreweras();
                assert_eq!(pi.block_count() + k.block_count(), p + 1);
                // K∘K is a rotation by one position (direction fixed by γ).
                let kk = k.kreweras();
                let r = pi.rotate();
                let r_back = (0..p - 1).fold(pi.clone(), |acc, _| acc.rotate());
                assert!(kk == r || kk == r_back, "p={p} pi={pi} kk={kk}");
            }
        }
    }

    #[test]
    fn display() {
        let pi = NonCrossingPartition::new(3, vec![vec![2, 0], vec![1]]).unwrap();
        assert_eq!(pi.to_string(), "{1,3}{2}");
    }
}
