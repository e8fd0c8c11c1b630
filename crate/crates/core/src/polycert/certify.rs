use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::pairing::{pairing_of_factors, PairingOptions, PairingOutcome};
use super::{char_poly, coeff_table, ExponentVector, LinearForm, MultiPoly, Multiplier, SubspaceSpec};
use crate::multilinear::binomial;
use crate::{Error, Result};

pub const DEFAULT_MULTIPLIER_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Universal,
    NotUniversalDimBound,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub spec: SubspaceSpec,
    pub multiplier: Multiplier,
    pub pairing: BigInt,
    pub verdict: Verdict,
    /// Multipliers tried, including the successful one.
    pub multipliers_tried: usize,
    pub peak_terms: usize,
    pub eliminated: bool,
    pub elapsed_secs: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub multiplier_budget: usize,
    /// Remove `x_m` before pairing (odd `m`, SOV exclusions present).
    /// `None` picks it automatically for odd `m ≥ 11`.
    pub eliminate_last_var: Option<bool>,
    pub pairing: PairingOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { multiplier_budget: DEFAULT_MULTIPLIER_BUDGET, eliminate_last_var: None, pairing: PairingOptions::default() }
    }
}

/// Whether `x_m` can be eliminated for this spec.
pub fn elimination_applies(spec: &SubspaceSpec) -> bool {
    spec.m() % 2 == 1 && spec.m() >= 7 && spec.contains_non_bsov()
}

/// `⟨μ f_U, p⟩` computed directly from the excluded linear forms.
pub fn pairing_direct(spec: &SubspaceSpec, mu: &Multiplier, opts: PairingOptions) -> Result<PairingOutcome> {
    super::vandermonde_pairing(spec.m(), &char_poly(spec), mu, opts)
}

/// `⟨μ f_U, p⟩` for odd `M = 2K+1` after eliminating `x_M`.
///
/// Modulo the coinvariant ideal the non-BSOV part of `f_U` equals
/// `∏_i g_i` with `g_i = Σ_{k=1}^{M−3} a_k x_{2i−1}^{M−2−k} x_{2i}^k`, so every
/// surviving term already uses `x_1 … x_{M−1}`. Terms of the remaining
/// factors that involve `x_M` leave no variable with exponent zero and pair
/// to zero, so `x_M` is set to zero there. Cancelling `x_1 ⋯ x_{M−1}`
/// against the Vandermonde polynomial in one fewer variable leaves the
/// sign unchanged because `M − 1` is even.
pub fn pairing_eliminated(spec: &SubspaceSpec, mu: &Multiplier, opts: PairingOptions) -> Result<PairingOutcome> {
    if !elimination_applies(spec) {
        return Err(Error::InvalidParameter(
            "elimination needs odd m >= 7 with every non-BSOV triple excluded".into(),
        ));
    }
    let m = spec.m();
    let mr = m - 1;
    let a = coeff_table(m)?;
    let mut factors = Vec::new();
    for i in 1..=m / 2 {
        let terms = (1..=m - 3).map(|k| {
            let mut e = vec![0u32; mr];
            e[2 * i - 2] = (m - 3 - k) as u32;
            e[2 * i - 1] = (k - 1) as u32;
            (ExponentVector(e), a.get(k))
        });
        factors.push(MultiPoly::from_terms(mr, terms)?);
    }
    let drop_last = |f: &[usize]| LinearForm(f.iter().copied().filter(|&v| v != m).collect());
    for t in spec.extra_excluded() {
        factors.push(MultiPoly::linear(mr, &drop_last(&t))?);
    }
    match mu {
        Multiplier::One => {}
        Multiplier::Monomial(e) => {
            if e.m() != m {
                return Err(Error::DimensionMismatch(format!("monomial in {} variables, expected {m}", e.m())));
            }
            if e.0[m - 1] > 0 {
                return Ok(PairingOutcome { value: BigInt::zero(), peak_terms: 0, wide: false });
            }
            factors.push(MultiPoly::monomial(ExponentVector(e.0[..mr].to_vec()), BigInt::one()));
        }
        Multiplier::Forms(fs) => {
            for f in fs {
                let reduced = drop_last(f.vars());
                if reduced.vars().is_empty() {
                    return Ok(PairingOutcome { value: BigInt::zero(), peak_terms: 0, wide: false });
                }
                factors.push(MultiPoly::linear(mr, &reduced)?);
            }
        }
    }
    pairing_of_factors(mr, &factors, opts)
}

/// Multipliers used in the single-occupancy certificates:
/// `x_1 x_3 ⋯ x_{M−1}` for even `M`, `(x_1 x_3 ⋯ x_{M−2})²` for odd `M`.
pub fn default_multiplier(m: usize) -> ExponentVector {
    let mut e = vec![0u32; m];
    if m % 2 == 0 {
        for i in (0..m).step_by(2) {
            e[i] = 1;
        }
    } else {
        for i in (0..m - 1).step_by(2) {
            e[i] = 2;
        }
    }
    ExponentVector(e)
}

/// Monomials of degree `d` in `m` variables with exponents `≤ m−1`, in
/// graded lexicographic order (`x_1^d` first), at most `limit` of them.
pub fn monomials_of_degree(m: usize, d: u32, limit: usize) -> Vec<ExponentVector> {
    fn rec(m: usize, pos: usize, left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<ExponentVector>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if pos == m - 1 {
            if left <= cap {
                cur[pos] = left;
                out.push(ExponentVector(cur.clone()));
                cur[pos] = 0;
            }
            return;
        }
        let rest_cap = cap * (m - 1 - pos) as u32;
        let hi = left.min(cap);
        let lo = left.saturating_sub(rest_cap);
        for x in (lo..=hi).rev() {
            cur[pos] = x;
            rec(m, pos + 1, left - x, cap, cur, out, limit);
            if out.len() >= limit {
                break;
            }
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if m == 0 || limit == 0 {
        return out;
    }
    let mut cur = vec![0u32; m];
    rec(m, 0, d, m as u32 - 1, &mut cur, &mut out, limit);
    out
}

/// Decide universality of the spanned subspace.
///
/// Too many exclusions put the dimension under `C(m,3) − C(m,2)`, which no
/// universal subspace reaches. Otherwise a nonzero pairing of `μ f_U`
/// with the Vandermonde polynomial certifies universality; the search over
/// `μ` is one-sided and ends in `Unknown` when the budget runs out.
pub fn certify(spec: &SubspaceSpec, opts: CertifyOptions) -> Result<Certificate> {
    let start = Instant::now();
    let m = spec.m();
    let delta = m * (m - 1) / 2;
    let d = spec.excluded().len();
    let eliminate = opts.eliminate_last_var.unwrap_or(m >= 11 && elimination_applies(spec));
    if eliminate && !elimination_applies(spec) {
        return Err(Error::InvalidParameter(
            "elimination needs odd m >= 7 with every non-BSOV triple excluded".into(),
        ));
    }
    let finish = |multiplier, pairing, verdict, tried, peak| Certificate {
        spec: spec.clone(),
        multiplier,
        pairing,
        verdict,
        multipliers_tried: tried,
        peak_terms: peak,
        eliminated: eliminate,
        elapsed_secs: start.elapsed().as_secs_f64(),
    };
    if d > delta {
        debug_assert!(spec.dim() + binomial(m, 2) < binomial(m, 3));
        return Ok(finish(Multiplier::One, BigInt::zero(), Verdict::NotUniversalDimBound, 0, 0));
    }
    let pair = |mu: &Multiplier| {
        if eliminate {
            pairing_eliminated(spec, mu, opts.pairing)
        } else {
            pairing_direct(spec, mu, opts.pairing)
        }
    };
    if d == delta {
        let out = pair(&Multiplier::One)?;
        let verdict = if out.value.is_zero() { Verdict::Unknown } else { Verdict::Universal };
        return Ok(finish(Multiplier::One, out.value, verdict, 1, out.peak_terms));
    }
    let need = (delta - d) as u32;
    let mut candidates = Vec::new();
    let default_mu = default_multiplier(m);
    if default_mu.degree() == need {
        candidates.push(default_mu.clone());
    }
    for e in monomials_of_degree(m, need, opts.multiplier_budget) {
        if e != default_mu {
            candidates.push(e);
        }
    }
    candidates.truncate(opts.multiplier_budget.max(1));
    let mut peak = 0;
    for (i, e) in candidates.into_iter().enumerate() {
        let mu = Multiplier::Monomial(e);
        let out = pair(&mu)?;
        peak = peak.max(out.peak_terms);
        if !out.value.is_zero() {
            return Ok(finish(mu, out.value, Verdict::Universal, i + 1, peak));
        }
    }
    Ok(finish(Multiplier::One, BigInt::zero(), Verdict::Unknown, opts.multiplier_budget, peak))
}

/// Pair `μ f_U` for one given multiplier, whose degree must make the
/// total `δ`. A zero pairing gives `Unknown`.
pub fn certify_with_multiplier(spec: &SubspaceSpec, mu: Multiplier, opts: CertifyOptions) -> Result<Certificate> {
    let start = Instant::now();
    let m = spec.m();
    let delta = m * (m - 1) / 2;
    let d = spec.excluded().len();
    if d + mu.degree() as usize != delta {
        return Err(Error::InvalidParameter(format!(
            "multiplier of degree {} with {d} excluded triples misses degree {delta}",
            mu.degree()
        )));
    }
    let eliminate = opts.eliminate_last_var.unwrap_or(m >= 11 && elimination_applies(spec));
    if eliminate && !elimination_applies(spec) {
        return Err(Error::InvalidParameter(
            "elimination needs odd m >= 7 with every non-BSOV triple excluded".into(),
        ));
    }
    let out = if eliminate { pairing_eliminated(spec, &mu, opts.pairing)? } else { pairing_direct(spec, &mu, opts.pairing)? };
    let verdict = if out.value.is_zero() { Verdict::Unknown } else { Verdict::Universal };
    Ok(Certificate {
        spec: spec.clone(),
        multiplier: mu,
        pairing: out.value,
        verdict,
        multipliers_tried: 1,
        peak_terms: out.peak_terms,
        eliminated: eliminate,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}
