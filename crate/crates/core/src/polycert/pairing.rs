//! The pairing `⟨q, p⟩` of a product of polynomial factors against the
//! Vandermonde polynomial, by a sparse dynamic program over factors.
//!
//! States are exponent vectors of the partial product. A variable is
//! *retired* right after the last factor that mentions it: its exponent
//! `v` is moved into a bit mask of used exponents, states reusing an
//! exponent are dropped (their Vandermonde coefficient is zero), and the
//! permutation sign contributed by the variable is folded into the
//! coefficient. With pruning on, a state is also dropped when its live
//! variables can no longer be matched to distinct unused exponents given
//! the degree each can still gain.
//!
//! Coefficients are exact: checked `i128` first, with a `BigInt` rerun if
//! any intermediate overflows.

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{ExponentVector, LinearForm, MultiPoly};
use crate::{Error, Result};

/// Largest variable count: four bits per exponent in a `u64`.
pub const MAX_VARS: usize = 16;

const SHARDS: usize = 64;
const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairingOptions {
    /// Drop states that cannot complete to a permutation exponent.
    pub prune: bool,
}

impl Default for PairingOptions {
    fn default() -> Self {
        Self { prune: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingOutcome {
    pub value: BigInt,
    /// Largest number of states held after any factor.
    pub peak_terms: usize,
    /// Whether the `BigInt` path was needed.
    pub wide: bool,
}

/// One factor: monomial terms with their coefficients.
#[derive(Clone, Debug)]
struct Factor {
    /// (packed exponent increment, (var, exponent) list, coefficient)
    terms: Vec<(u64, Vec<(usize, u8)>, BigInt)>,
    min_var: usize,
    max_var: usize,
    max_deg: Vec<u32>,
}

impl Factor {
    fn from_poly(p: &MultiPoly) -> Result<Self> {
        let m = p.m();
        let mut terms = Vec::with_capacity(p.len());
        let mut max_deg = vec![0u32; m];
        let mut min_var = usize::MAX;
        let mut max_var = 0;
        for (e, c) in p.terms() {
            let mut packed = 0u64;
            let mut vars = Vec::new();
            for (i, &x) in e.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if x as usize >= m {
                    // no exponent above m−1 survives, so the term never contributes
                    packed = u64::MAX;
                    break;
                }
                packed |= (x as u64) << (4 * i);
                vars.push((i, x as u8));
                max_deg[i] = max_deg[i].max(x);
                min_var = min_var.min(i);
                max_var = max_var.max(i);
            }
            if packed != u64::MAX {
                terms.push((packed, vars, c.clone()));
            }
        }
        if min_var == usize::MAX {
            min_var = 0;
        }
        Ok(Self { terms, min_var, max_var, max_deg })
    }
}

/// Exact ring used for the coefficients.
trait Coeff: Clone + Send + Sync + Sized {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn add_assign(&mut self, other: &Self) -> bool;
    fn negated(&self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn nil() -> Self {
        0
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn add_assign(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
    fn negated(&self) -> Self {
        // |values| never reach i128::MIN: every add is checked
        -*self
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn add_assign(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
    fn negated(&self) -> Self {
        -self
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Precomputed schedule for a fixed factor order.
struct Plan {
    m: usize,
    factors: Vec<Factor>,
    /// Variables to retire after factor `f` (index `f + 1`; index 0 is before any factor).
    retire_after: Vec<Vec<usize>>,
    /// `rem[f][j]`: degree variable `j` can still gain after factor `f` (same offset).
    rem: Vec<Vec<u32>>,
}

impl Plan {
    fn new(m: usize, mut factors: Vec<Factor>) -> Self {
        factors.sort_by_key(|f| (f.min_var, f.max_var));
        let nf = factors.len();
        let mut last: Vec<Option<usize>> = vec![None; m];
        for (fi, f) in factors.iter().enumerate() {
            for (j, &d) in f.max_deg.iter().enumerate() {
                if d > 0 {
                    last[j] = Some(fi);
                }
            }
        }
        let mut retire_after = vec![Vec::new(); nf + 1];
        for (j, l) in last.iter().enumerate() {
            match l {
                Some(fi) => retire_after[fi + 1].push(j),
                None => retire_after[0].push(j),
            }
        }
        let mut rem = vec![vec![0u32; m]; nf + 1];
        for fi in (0..nf).rev() {
            for j in 0..m {
                rem[fi][j] = rem[fi + 1][j] + factors[fi].max_deg[j];
            }
        }
        Self { m, factors, retire_after, rem }
    }
}

#[inline]
fn nibble(e: u64, j: usize) -> u32 {
    ((e >> (4 * j)) & 0xF) as u32
}

#[inline]
fn shard_of(key: u128) -> usize {
    let h = ((key as u64) ^ ((key >> 64) as u64).rotate_left(29)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    (h >> 58) as usize % SHARDS
}

/// Retire the variables in `vars` (ascending), returning the new key and
/// whether the sign flips, or `None` if an exponent repeats.
#[inline]
fn retire(key: u128, vars: &[usize], live_before: u32, m: usize) -> Option<(u128, bool)> {
    let mut exps = key as u64;
    let mut used = (key >> 64) as u32;
    let mut live = live_before;
    let mut flip = false;
    for &t in vars {
        let v = nibble(exps, t);
        if used & (1 << v) != 0 {
            return None;
        }
        live &= !(1 << t);
        let free_below = (!used & ((1u32 << v) - 1)).count_ones();
        let live_below = (live & ((1u32 << t) - 1)).count_ones();
        if (free_below + live_below) % 2 == 1 {
            flip = !flip;
        }
        used |= 1 << v;
        exps &= !(0xFu64 << (4 * t));
    }
    debug_assert!(used < (1u32 << m));
    Some(((exps as u128) | ((used as u128) << 64), flip))
}

/// Can the live variables still take distinct unused exponents?
#[inline]
fn feasible(key: u128, live: u32, rem: &[u32], m: usize) -> bool {
    let exps = key as u64;
    let used = (key >> 64) as u32;
    let mut avail = !used & ((1u32 << m) - 1);
    let mut iv: [(u32, u32); MAX_VARS] = [(0, 0); MAX_VARS];
    let mut n = 0;
    let mut l = live;
    while l != 0 {
        let j = l.trailing_zeros() as usize;
        l &= l - 1;
        let lo = nibble(exps, j);
        let hi = (lo + rem[j]).min(m as u32 - 1);
        iv[n] = (hi, lo);
        n += 1;
    }
    let iv = &mut iv[..n];
    iv.sort_unstable();
    for &(hi, lo) in iv.iter() {
        let cand = avail & !((1u32 << lo) - 1);
        if cand == 0 {
            return false;
        }
        let v = cand.trailing_zeros();
        if v > hi {
            return false;
        }
        avail &= !(1 << v);
    }
    true
}

fn run<C: Coeff>(plan: &Plan, opts: PairingOptions) -> Option<(BigInt, usize)> {
    let m = plan.m;
    let overflow = AtomicBool::new(false);
    let mut live: u32 = (1u32 << m) - 1;

    let mut states: Vec<(u128, C)> = Vec::new();
    let start = match retire(0, &plan.retire_after[0], live, m) {
        Some((k, flip)) => {
            let one = C::from_big(&BigInt::from(1))?;
            (k, if flip { one.negated() } else { one })
        }
        None => return Some((BigInt::zero(), 1)),
    };
    for &t in &plan.retire_after[0] {
        live &= !(1 << t);
    }
    states.push(start);
    let mut peak = 1usize;

    for (fi, factor) in plan.factors.iter().enumerate() {
        let terms: Vec<(u64, &[(usize, u8)], C)> =
            factor.terms.iter().map(|(p, v, c)| Some((*p, v.as_slice(), C::from_big(c)?))).collect::<Option<_>>()?;
        let retiring = &plan.retire_after[fi + 1];
        let live_before = live;
        let mut live_after = live;
        for &t in retiring {
            live_after &= !(1 << t);
        }
        let rem = &plan.rem[fi + 1];
        let cap = m as u32 - 1;

        let expand = |chunk: &[(u128, C)]| -> Vec<FxHashMap<u128, C>> {
            let mut shards: Vec<FxHashMap<u128, C>> = (0..SHARDS).map(|_| FxHashMap::default()).collect();
            for (key, c) in chunk {
                let exps = *key as u64;
                'term: for (inc, vars, tc) in &terms {
                    for &(j, x) in vars.iter() {
                        if nibble(exps, j) + x as u32 > cap {
                            continue 'term;
                        }
                    }
                    let nk = ((exps + inc) as u128) | (key & !(u64::MAX as u128));
                    let (nk, flip) = match retire(nk, retiring, live_before, m) {
                        Some(r) => r,
                        None => continue,
                    };
                    if opts.prune && !feasible(nk, live_after, rem, m) {
                        continue;
                    }
                    let Some(mut v) = c.mul(tc) else {
                        overflow.store(true, Ordering::Relaxed);
                        return shards;
                    };
                    if flip {
                        v = v.negated();
                    }
                    let slot = shards[shard_of(nk)].entry(nk).or_insert_with(C::nil);
                    if !slot.add_assign(&v) {
                        overflow.store(true, Ordering::Relaxed);
                        return shards;
                    }
                }
            }
            shards
        };

        let partials: Vec<Vec<FxHashMap<u128, C>>> = if states.len() >= PAR_THRESHOLD {
            let chunk = states.len().div_ceil(rayon::current_num_threads() * 4).max(1024);
            states.par_chunks(chunk).map(expand).collect()
        } else {
            vec![expand(&states)]
        };
        if overflow.load(Ordering::Relaxed) {
            return None;
        }
        let merged: Vec<Vec<(u128, C)>> = (0..SHARDS)
            .into_par_iter()
            .map(|s| {
                let mut acc: FxHashMap<u128, C> = FxHashMap::default();
                for part in &partials {
                    for (k, v) in &part[s] {
                        let slot = acc.entry(*k).or_insert_with(C::nil);
                        if !slot.add_assign(v) {
                            overflow.store(true, Ordering::Relaxed);
                            return Vec::new();
                        }
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_nil()).collect()
            })
            .collect();
        drop(partials);
        if overflow.load(Ordering::Relaxed) {
            return None;
        }
        states = merged.into_iter().flatten().collect();
        peak = peak.max(states.len());
        live = live_after;
        if states.is_empty() {
            return Some((BigInt::zero(), peak));
        }
    }
    debug_assert_eq!(live, 0);
    let mut total = C::nil();
    for (_, v) in &states {
        if !total.add_assign(v) {
            return None;
        }
    }
    Some((total.to_big(), peak))
}

/// `⟨∏ factors, p⟩` where every factor is a homogeneous polynomial in `m`
/// variables and the total degree is `m(m−1)/2`.
pub fn pairing_of_factors(m: usize, factors: &[MultiPoly], opts: PairingOptions) -> Result<PairingOutcome> {
    if m == 0 || m > MAX_VARS {
        return Err(Error::InvalidParameter(format!("pairing supports 1..={MAX_VARS} variables, got {m}")));
    }
    let delta = (m * (m - 1) / 2) as u32;
    let mut deg = 0u32;
    for f in factors {
        if f.m() != m {
            return Err(Error::DimensionMismatch(format!("factor in {} variables, expected {m}", f.m())));
        }
        if f.is_empty() {
            return Ok(PairingOutcome { value: BigInt::zero(), peak_terms: 0, wide: false });
        }
        let d = f.total_degree().unwrap_or(0);
        if !f.is_homogeneous_of_degree(d) {
            return Err(Error::InvalidParameter("factors must be homogeneous".into()));
        }
        deg += d;
    }
    if deg != delta {
        return Err(Error::InvalidParameter(format!("total degree {deg} differs from m(m-1)/2 = {delta}")));
    }
    let plan = Plan::new(m, factors.iter().map(Factor::from_poly).collect::<Result<_>>()?);
    if let Some((value, peak_terms)) = run::<i128>(&plan, opts) {
        return Ok(PairingOutcome { value, peak_terms, wide: false });
    }
    let (value, peak_terms) = run::<BigInt>(&plan, opts).expect("BigInt arithmetic cannot overflow");
    Ok(PairingOutcome { value, peak_terms, wide: true })
}

/// A multiplier `μ` for the characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Multiplier {
    One,
    Monomial(ExponentVector),
    Forms(Vec<LinearForm>),
}

impl Multiplier {
    pub fn degree(&self) -> u32 {
        match self {
            Multiplier::One => 0,
            Multiplier::Monomial(e) => e.degree(),
            Multiplier::Forms(f) => f.len() as u32,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Multiplier::One => "1".into(),
            Multiplier::Monomial(e) => e.to_string(),
            Multiplier::Forms(f) => f.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("*"),
        }
    }

    fn polys(&self, m: usize) -> Result<Vec<MultiPoly>> {
        Ok(match self {
            Multiplier::One => Vec::new(),
            Multiplier::Monomial(e) => {
                if e.m() != m {
                    return Err(Error::DimensionMismatch(format!("monomial in {} variables, expected {m}", e.m())));
                }
                vec![MultiPoly::monomial(e.clone(), BigInt::from(1))]
            }
            Multiplier::Forms(f) => f.iter().map(|l| MultiPoly::linear(m, l)).collect::<Result<_>>()?,
        })
    }
}

/// `⟨μ · ∏ forms, p⟩`.
pub fn vandermonde_pairing(m: usize, forms: &[LinearForm], mu: &Multiplier, opts: PairingOptions) -> Result<PairingOutcome> {
    let mut polys = mu.polys(m)?;
    for f in forms {
        polys.push(MultiPoly::linear(m, f)?);
    }
    pairing_of_factors(m, &polys, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::seq::SliceRandom;
    use rand::Rng;

    use crate::rng::seeded;

    fn naive(m: usize, factors: &[MultiPoly]) -> BigInt {
        let mut p = MultiPoly::one(m);
        for f in factors {
            p = &p * f;
        }
        p.vandermonde_pairing()
    }

    #[test]
    fn staircase_is_one() {
        for m in 1..8 {
            let mu = Multiplier::Monomial(ExponentVector::staircase(m));
            assert_eq!(vandermonde_pairing(m, &[], &mu, PairingOptions::default()).unwrap().value, BigInt::from(1));
        }
    }

    #[test]
    fn every_permutation_monomial_gets_its_sign() {
        let m = 5;
        let mut perm: Vec<u32> = (0..m as u32).collect();
        let mut rng = seeded(3);
        for _ in 0..40 {
            perm.shuffle(&mut rng);
            let e = ExponentVector(perm.clone());
            let s = e.permutation_sign().unwrap();
            let out = vandermonde_pairing(m, &[], &Multiplier::Monomial(e), PairingOptions::default()).unwrap();
            assert_eq!(out.value, BigInt::from(s));
        }
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let r = vandermonde_pairing(4, &[LinearForm(vec![1, 2])], &Multiplier::One, PairingOptions::default());
        assert!(r.is_err());
    }

    fn random_forms<R: Rng>(m: usize, count: usize, rng: &mut R) -> Vec<LinearForm> {
        (0..count)
            .map(|_| {
                let mut v: Vec<usize> = (1..=m).collect();
                v.shuffle(rng);
                let mut t = v[..3].to_vec();
                t.sort();
                LinearForm(t)
            })
            .collect()
    }

    #[test]
    fn matches_full_expansion_with_and_without_prune() {
        let mut rng = seeded(11);
        for m in 3..=6 {
            let delta = m * (m - 1) / 2;
            for trial in 0..12 {
                let nforms = rng.random_range(0..=delta);
                let forms = random_forms(m, nforms, &mut rng);
                // fill the remaining degree with a random monomial
                let mut e = vec![0u32; m];
                for _ in nforms..delta {
                    e[rng.random_range(0..m)] += 1;
                }
                let mu = Multiplier::Monomial(ExponentVector(e));
                let mut polys = mu.polys(m).unwrap();
                polys.extend(forms.iter().map(|f| MultiPoly::linear(m, f).unwrap()));
                let oracle = naive(m, &polys);
                let on = vandermonde_pairing(m, &forms, &mu, PairingOptions { prune: true }).unwrap();
                let off = vandermonde_pairing(m, &forms, &mu, PairingOptions { prune: false }).unwrap();
                assert_eq!(on.value, oracle, "m = {m}, trial {trial}");
                assert_eq!(off.value, oracle, "m = {m}, trial {trial}");
                assert!(on.peak_terms <= off.peak_terms);
            }
        }
    }

    #[test]
    fn signed_general_factors() {
        // (x1 − x2)(x1 − x3)(x2 − x3) pairs to −3! ... checked against expansion
        let m = 3;
        let mono = |v: Vec<u32>, c: i64| MultiPoly::monomial(ExponentVector(v), BigInt::from(c));
        let f1 = &mono(vec![1, 0, 0], 1) + &mono(vec![0, 1, 0], -1);
        let f2 = &mono(vec![1, 0, 0], 1) + &mono(vec![0, 0, 1], -1);
        let f3 = &mono(vec![0, 1, 0], 1) + &mono(vec![0, 0, 1], -1);
        let fs = vec![f1, f2, f3];
        let out = pairing_of_factors(m, &fs, PairingOptions::default()).unwrap();
        assert_eq!(out.value, naive(m, &fs));
        assert_eq!(out.value, BigInt::from(-6));
    }

    #[test]
    fn wide_path_agrees() {
        let m = 4;
        let big: BigInt = BigInt::from(i128::MAX) * 4;
        let mono = |v: Vec<u32>, c: BigInt| MultiPoly::monomial(ExponentVector(v), c);
        let fs = vec![
            mono(vec![1, 1, 0, 0], big.clone()),
            &mono(vec![0, 0, 1, 0], BigInt::from(1)) + &mono(vec![0, 0, 0, 1], BigInt::from(2)),
            MultiPoly::linear(4, &LinearForm(vec![3, 4])).unwrap(),
            &MultiPoly::linear(4, &LinearForm(vec![3])).unwrap() * &MultiPoly::linear(4, &LinearForm(vec![3, 4])).unwrap(),
        ];
        let out = pairing_of_factors(m, &fs, PairingOptions::default()).unwrap();
        assert!(out.wide);
        assert_eq!(out.value, naive(m, &fs));
    }
}
