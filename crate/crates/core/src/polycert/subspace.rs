use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::LinearForm;
use crate::multilinear::binomial;
use crate::{Error, Result};

/// A subspace of `∧³ C^m` spanned by the basis trivectors `e_{ijk}` whose
/// triples are not in `excluded`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceSpec {
    m: usize,
    excluded: BTreeSet<[usize; 3]>,
}

/// Named families of excluded triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Excludes every triple containing a standard pair `{2k−1, 2k}`.
    Sov,
    /// `Sov` plus `(1,3,6)`, `(1,4,6)` and `(1,2i−3,2i−1)` for `3 ≤ i ≤ K`.
    MinimalEven,
    /// `Sov` plus `(1,4,M)`, `(2,5,M)` and `(i,i+2,M)` for `1 ≤ i ≤ M−3`.
    MinimalOdd,
}

impl SubspaceSpec {
    pub fn new(m: usize, excluded: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        if m < 3 {
            return Err(Error::InvalidParameter(format!("m = {m} is too small for trivectors")));
        }
        let mut set = BTreeSet::new();
        for t in excluded {
            if !(1 <= t[0] && t[0] < t[1] && t[1] < t[2] && t[2] <= m) {
                return Err(Error::InvalidCombination { indices: t.to_vec(), m, reason: "triple must satisfy 1 <= i < j < k <= m" });
            }
            set.insert(t);
        }
        Ok(Self { m, excluded: set })
    }

    pub fn preset(preset: Preset, m: usize) -> Result<Self> {
        match preset {
            Preset::Sov => Self::sov(m),
            Preset::MinimalEven => Self::minimal_even(m),
            Preset::MinimalOdd => Self::minimal_odd(m),
        }
    }

    pub fn sov(m: usize) -> Result<Self> {
        Self::new(m, non_bsov_triples(m))
    }

    pub fn minimal_even(m: usize) -> Result<Self> {
        if m < 6 || m % 2 != 0 {
            return Err(Error::InvalidParameter(format!("minimal-even preset needs even m >= 6, got {m}")));
        }
        let k = m / 2;
        let mut ex = non_bsov_triples(m);
        ex.push([1, 3, 6]);
        ex.push([1, 4, 6]);
        for i in 3..=k {
            ex.push([1, 2 * i - 3, 2 * i - 1]);
        }
        Self::new(m, ex)
    }

    pub fn minimal_odd(m: usize) -> Result<Self> {
        if m < 7 || m % 2 == 0 {
            return Err(Error::InvalidParameter(format!("minimal-odd preset needs odd m >= 7, got {m}")));
        }
        let mut ex = non_bsov_triples(m);
        ex.push([1, 4, m]);
        ex.push([2, 5, m]);
        for i in 1..=m - 3 {
            ex.push([i, i + 2, m]);
        }
        Self::new(m, ex)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn excluded(&self) -> &BTreeSet<[usize; 3]> {
        &self.excluded
    }

    pub fn dim(&self) -> usize {
        binomial(self.m, 3) - self.excluded.len()
    }

    /// Whether every triple meeting a standard pair twice is excluded.
    pub fn contains_non_bsov(&self) -> bool {
        non_bsov_triples(self.m).iter().all(|t| self.excluded.contains(t))
    }

    /// Excluded triples that are BSOV, i.e. beyond the SOV exclusions.
    pub fn extra_excluded(&self) -> Vec<[usize; 3]> {
        self.excluded.iter().filter(|t| !is_non_bsov(t)).copied().collect()
    }
}

fn pair_of(i: usize) -> usize {
    (i + 1) / 2
}

fn is_non_bsov(t: &[usize; 3]) -> bool {
    // a pair index past m/2 belongs to the unpaired last mode of odd m
    let (a, b, c) = (pair_of(t[0]), pair_of(t[1]), pair_of(t[2]));
    (a == b && t[1] == 2 * a) || (b == c && t[2] == 2 * b)
}

/// Triples containing a full standard pair `{2k−1, 2k}` with `2k ≤ m`.
pub fn non_bsov_triples(m: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            for k in j + 1..=m {
                let t = [i, j, k];
                if is_non_bsov(&t) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// One linear form `x_i + x_j + x_k` per excluded triple.
pub fn char_poly(spec: &SubspaceSpec) -> Vec<LinearForm> {
    spec.excluded.iter().map(|t| LinearForm(t.to_vec())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_bsov_counts() {
        // total minus BSOV count: even 8·C(K,3), odd adds 4·C(K,2)
        for (m, expected) in [(6, 12), (7, 15), (8, 24), (9, 28), (11, 45)] {
            assert_eq!(non_bsov_triples(m).len(), expected, "m = {m}");
            let k = m / 2;
            let bsov = 8 * binomial(k, 3) + if m % 2 == 1 { 4 * binomial(k, 2) } else { 0 };
            assert_eq!(binomial(m, 3) - bsov, expected);
        }
    }

    #[test]
    fn char_poly_sizes() {
        assert!(char_poly(&SubspaceSpec::new(6, []).unwrap()).is_empty());
        assert_eq!(char_poly(&SubspaceSpec::sov(6).unwrap()).len(), 12);
        assert_eq!(char_poly(&SubspaceSpec::minimal_even(6).unwrap()).len(), 15);
    }

    #[test]
    fn presets_reach_vandermonde_degree() {
        for m in [6, 8, 10, 12] {
            let s = SubspaceSpec::minimal_even(m).unwrap();
            assert_eq!(s.excluded().len(), m * (m - 1) / 2);
            assert_eq!(s.dim(), m * (m - 1) * (m - 5) / 6);
            assert_eq!(s.extra_excluded().len(), m / 2);
        }
        for m in [7, 9, 11, 13] {
            let s = SubspaceSpec::minimal_odd(m).unwrap();
            assert_eq!(s.excluded().len(), m * (m - 1) / 2);
            assert_eq!(s.dim(), m * (m - 1) * (m - 5) / 6);
            assert_eq!(s.extra_excluded().len(), m - 1);
            assert!(s.contains_non_bsov());
        }
    }

    #[test]
    fn rejects_bad_triples() {
        assert!(SubspaceSpec::new(6, [[1, 1, 2]]).is_err());
        assert!(SubspaceSpec::new(6, [[3, 2, 1]]).is_err());
        assert!(SubspaceSpec::new(6, [[1, 2, 7]]).is_err());
        assert!(SubspaceSpec::minimal_even(7).is_err());
        assert!(SubspaceSpec::minimal_odd(8).is_err());
    }
}
