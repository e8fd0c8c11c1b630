use serde::{Deserialize, Serialize};

use crate::multilinear::{binomial, combination_masks, Combination};
use crate::{Error, FermionState, Result};

/// The standard pair `{2k−1, 2k}` containing a mode index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardPair {
    pub k: usize,
}

impl StandardPair {
    /// Pair of the 1-based mode `i`.
    pub fn of(i: usize) -> Self {
        Self { k: i.div_ceil(2) }
    }

    pub fn modes(&self) -> (usize, usize) {
        (2 * self.k - 1, 2 * self.k)
    }
}

const LOW_BITS: u64 = 0x5555_5555_5555_5555;

/// Does the basis element `mask` fill some standard pair completely?
#[inline]
pub fn mask_hits_pair_twice(mask: u64) -> bool {
    mask & (mask >> 1) & LOW_BITS != 0
}

/// Is `mask` a BSOV (all occupied modes in distinct standard pairs)?
#[inline]
pub fn is_bsov_mask(mask: u64) -> bool {
    !mask_hits_pair_twice(mask)
}

/// All BSOV combinations, in lexicographic order.
pub fn bsov_enumerate(m: usize, n: usize) -> Result<Vec<Combination>> {
    if n > m {
        return Err(Error::InvalidParameter(format!("n = {n} exceeds m = {m}")));
    }
    Ok(combination_masks(m, n).into_iter().filter(|&s| is_bsov_mask(s)).map(|s| Combination::from_mask(m, s)).collect())
}

/// `2^n C(K,n)` for `m = 2K`, plus `2^{n−1} C(K,n−1)` for `m = 2K+1`.
pub fn bsov_count(m: usize, n: usize) -> usize {
    let k = m / 2;
    let mut c = (1usize << n) * binomial(k, n);
    if m % 2 == 1 && n >= 1 {
        c += (1usize << (n - 1)) * binomial(k, n - 1);
    }
    c
}

/// Outcome of the coefficient-level single-occupancy test.
#[derive(Clone, Debug, PartialEq)]
pub struct SovReport {
    pub is_sov: bool,
    pub max_offending_amp: f64,
    /// Basis elements filling a standard pair with amplitude above tolerance.
    pub offending: Vec<Combination>,
}

/// Flags basis elements containing a standard pair with `|amp| > tol·‖ψ‖`.
pub fn is_sov(psi: &FermionState, tol: f64) -> Result<SovReport> {
    if psi.is_zero() {
        return Err(Error::DegenerateInput("single-occupancy test of the zero state"));
    }
    let cut = tol * psi.norm();
    let mut max_off = 0.0f64;
    let mut offending = Vec::new();
    for (a, s) in psi.amps().iter().zip(psi.basis_masks()) {
        if mask_hits_pair_twice(s) {
            let v = a.norm();
            max_off = max_off.max(v);
            if v > cut {
                offending.push(Combination::from_mask(psi.m(), s));
            }
        }
    }
    Ok(SovReport { is_sov: max_off <= cut, max_offending_amp: max_off, offending })
}

/// `‖Π_{S⊥} ψ‖²`, the weight outside the single-occupancy subspace.
pub fn off_sov_weight(psi: &FermionState) -> f64 {
    psi.amps().iter().zip(psi.basis_masks()).filter(|(_, s)| mask_hits_pair_twice(*s)).map(|(a, _)| a.norm_sqr()).sum()
}
