use num_bigint::BigInt;
use num_traits::One;

use super::coeff_table;
use crate::{Error, Result};

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// `K! ∏_{i=0}^{K−1} (a_{M−1−i} − a_i)`, the pairing for the single-occupancy
/// subspace at even `M = 2K` with `μ = x_1 x_3 ⋯ x_{M−1}`.
pub fn closed_form_even(m: usize) -> Result<BigInt> {
    if m < 6 || m % 2 != 0 {
        return Err(Error::InvalidParameter(format!("closed_form_even needs even M >= 6, got {m}")));
    }
    let a = coeff_table(m)?;
    let k = m / 2;
    Ok((0..k).fold(factorial(k), |acc, i| acc * (a.get(m - 1 - i) - a.get(i))))
}

/// `K! ∏_{i=1}^{K} (a_{M−i} − a_i)`, the pairing at odd `M = 2K+1` with
/// `μ = (x_1 x_3 ⋯ x_{M−2})²`.
pub fn closed_form_odd(m: usize) -> Result<BigInt> {
    if m < 7 || m % 2 != 1 {
        return Err(Error::InvalidParameter(format!("closed_form_odd needs odd M >= 7, got {m}")));
    }
    let a = coeff_table(m)?;
    let k = m / 2;
    Ok((1..=k).fold(factorial(k), |acc, i| acc * (a.get(m - i) - a.get(i))))
}

/// Dimension counts for `∧^N C^M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimsReport {
    pub m: usize,
    pub n: usize,
    /// `C(M, N)`.
    pub total: BigInt,
    /// `C(M, 2)`.
    pub group: BigInt,
    /// `max(0, C(M,N) − C(M,2))`: no universal subspace is smaller.
    pub lower_bound: BigInt,
    /// Dimension of the bundle of LU orbits through the SOV subspace.
    pub sov_bundle: BigInt,
    pub sov_bundle_below_total: bool,
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Counts for `(M, N)`, with the orbit bundle dimension
/// `D = 4K(K−1) + 2^N C(K,N)` for `M = 2K` and
/// `D = 4K² + 2^N C(K,N) + 2^{N−1} C(K,N−1)` for `M = 2K+1`.
pub fn dims_report(m: usize, n: usize) -> Result<DimsReport> {
    if n < 2 || m < 2 * n {
        return Err(Error::InvalidParameter(format!("dims_report needs M >= 2N >= 4, got M = {m}, N = {n}")));
    }
    let k = m / 2;
    let total = binom(m, n);
    let group = binom(m, 2);
    let lower_bound = (&total - &group).max(BigInt::from(0));
    let pow = |e: usize| BigInt::one() << e;
    let sov_bundle = if m % 2 == 0 {
        BigInt::from(4 * k * (k - 1)) + pow(n) * binom(k, n)
    } else {
        BigInt::from(4 * k * k) + pow(n) * binom(k, n) + pow(n - 1) * binom(k, n - 1)
    };
    let sov_bundle_below_total = sov_bundle < total;
    Ok(DimsReport { m, n, total, group, lower_bound, sov_bundle, sov_bundle_below_total })
}
