use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// The integers `a_0^{(M)} … a_{M−2}^{(M)}` defined by
///
/// `Σ_{j=0}^{M−2} (−1)^j (x+y)^{M−2−j} Σ_{k=0}^{j} x^{j−k} y^k = Σ_k a_k x^{M−2−k} y^k`,
///
/// with the convention `a_{M−1} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    m: usize,
    values: Vec<BigInt>,
}

impl CoeffTable {
    pub fn m(&self) -> usize {
        self.m
    }

    /// `a_0 … a_{M−2}`.
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `a_p`, zero for `p ≥ M − 1`.
    pub fn get(&self, p: usize) -> BigInt {
        self.values.get(p).cloned().unwrap_or_else(BigInt::zero)
    }
}

/// Builds the table from the row `M = 4` by
/// `a_p^{(M)} = a_{p−1}^{(M−1)} + a_p^{(M−1)} + (−1)^{M−2}` for `1 ≤ p ≤ M−3`,
/// with `a_0 = a_{M−2}` equal to 1 for even `M` and 0 for odd `M`.
pub fn coeff_table(m: usize) -> Result<CoeffTable> {
    if m < 4 {
        return Err(Error::InvalidParameter(format!("coefficient table needs M >= 4, got {m}")));
    }
    let mut row: Vec<BigInt> = vec![BigInt::one(); 3];
    for mm in 5..=m {
        let edge = if mm % 2 == 0 { BigInt::one() } else { BigInt::zero() };
        let step = if mm % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let prev = |p: usize| row.get(p).cloned().unwrap_or_else(BigInt::zero);
        let mut next = Vec::with_capacity(mm - 1);
        next.push(edge.clone());
        for p in 1..=mm - 3 {
            next.push(prev(p - 1) + prev(p) + &step);
        }
        next.push(edge);
        row = next;
    }
    Ok(CoeffTable { m, values: row })
}
