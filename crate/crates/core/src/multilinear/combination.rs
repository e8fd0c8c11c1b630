//! Lexicographic ranking of index tuples `1 ≤ i_1 < … < i_n ≤ m`.
//!
//! Internally a combination is also carried as a bit mask (bit `i - 1` set
//! for index `i`), which makes subset and disjointness tests cheap. Masks
//! limit `m` to 64, far above the sizes a dense state vector can reach.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest single-particle dimension supported by the mask representation.
pub const MAX_M: usize = 64;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// A sorted index tuple identifying one Slater determinant `|i_1 ∧ … ∧ i_n⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Combination {
    m: usize,
    indices: Vec<usize>,
}

impl Combination {
    pub fn new(m: usize, indices: Vec<usize>) -> Result<Self> {
        if m > MAX_M {
            return Err(Error::InvalidParameter(format!("m = {m} exceeds {MAX_M}")));
        }
        if indices.iter().any(|&i| i == 0 || i > m) {
            return Err(Error::InvalidCombination { indices, m, reason: "index outside [1, m]" });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCombination { indices, m, reason: "indices not strictly increasing" });
        }
        Ok(Self { m, indices })
    }

    pub(crate) fn from_mask(m: usize, mask: u64) -> Self {
        Self { m, indices: mask_indices(mask).collect() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn mask(&self) -> u64 {
        indices_mask(&self.indices)
    }

    /// Position in the lexicographic enumeration of all `C(m, n)` tuples.
    pub fn rank(&self) -> usize {
        rank_mask(self.m, self.mask())
    }

    pub fn unrank(m: usize, n: usize, r: usize) -> Result<Self> {
        let count = binomial(m, n);
        if n > m || r >= count {
            return Err(Error::RankOutOfRange { rank: r, m, n, count });
        }
        Ok(Self::from_mask(m, unrank_mask(m, n, r)))
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn indices_mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |acc, &i| acc | (1u64 << (i - 1)))
}

/// 1-based indices of the set bits, ascending.
pub(crate) fn mask_indices(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let t = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(t + 1)
        }
    })
}

pub(crate) fn rank_mask(m: usize, mask: u64) -> usize {
    let n = mask.count_ones() as usize;
    let mut r = 0;
    let mut prev = 0;
    for (k, c) in mask_indices(mask).enumerate() {
        for v in prev + 1..c {
            r += binomial(m - v, n - k - 1);
        }
        prev = c;
    }
    r
}

pub(crate) fn unrank_mask(m: usize, n: usize, mut r: usize) -> u64 {
    let mut mask = 0u64;
    let mut v = 1;
    for k in 0..n {
        loop {
            let block = binomial(m - v, n - k - 1);
            if r < block {
                break;
            }
            r -= block;
            v += 1;
        }
        mask |= 1u64 << (v - 1);
        v += 1;
    }
    mask
}

/// All `n`-subsets of `{1..m}` as masks, in lexicographic order of the tuples.
pub fn combination_masks(m: usize, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(binomial(m, n));
    let mut idx: Vec<usize> = (1..=n).collect();
    if n > m {
        return out;
    }
    loop {
        out.push(indices_mask(&idx));
        // advance to the lexicographic successor
        let mut k = n;
        while k > 0 && idx[k - 1] == m - n + k {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Number of set bits of `mask` strictly below bit `bit`.
#[inline]
pub(crate) fn bits_below(mask: u64, bit: usize) -> u32 {
    (mask & ((1u64 << bit) - 1)).count_ones()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_m4_n2() {
        assert_eq!(Combination::new(4, vec![1, 2]).unwrap().rank(), 0);
        assert_eq!(Combination::unrank(4, 2, 5).unwrap().indices(), &[3, 4]);
    }

    #[test]
    fn rank_matches_enumeration_m6_n3() {
        // brute force: count lexicographic predecessors among all 20 tuples
        let mut all = Vec::new();
        for a in 1..=6 {
            for b in a + 1..=6 {
                for c in b + 1..=6 {
                    all.push(vec![a, b, c]);
                }
            }
        }
        all.sort();
        assert_eq!(all.len(), 20);
        let target = vec![1, 3, 5];
        let expected = all.iter().filter(|t| **t < target).count();
        assert_eq!(expected, 5);
        assert_eq!(Combination::new(6, target).unwrap().rank(), expected);
        for (r, t) in all.iter().enumerate() {
            assert_eq!(Combination::new(6, t.clone()).unwrap().rank(), r);
        }
    }

    #[test]
    fn roundtrip_m8_n4() {
        for r in 0..binomial(8, 4) {
            assert_eq!(Combination::unrank(8, 4, r).unwrap().rank(), r);
        }
        assert_eq!(combination_masks(8, 4).len(), 70);
        for (r, &mask) in combination_masks(8, 4).iter().enumerate() {
            assert_eq!(rank_mask(8, mask), r);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Combination::new(5, vec![2, 2]).is_err());
        assert!(Combination::new(5, vec![3, 1]).is_err());
        assert!(Combination::new(5, vec![0, 1]).is_err());
        assert!(Combination::new(5, vec![1, 6]).is_err());
        assert!(Combination::unrank(4, 2, 6).is_err());
        assert!(Combination::unrank(3, 4, 0).is_err());
    }

    #[test]
    fn empty_combination() {
        let c = Combination::unrank(5, 0, 0).unwrap();
        assert_eq!(c.n(), 0);
        assert_eq!(c.rank(), 0);
        assert_eq!(combination_masks(5, 0), vec![0]);
    }
}
