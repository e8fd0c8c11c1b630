use std::ops::{Add, Mul, Sub};

use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::combination::{
    binomial, bits_below, combination_masks, indices_mask, rank_mask, Combination, MAX_M,
};
use crate::{Error, Result, C64};

/// A vector of `∧^n V`, `dim V = m`, with amplitudes in lexicographic
/// combination order.
#[derive(Clone, Debug, PartialEq)]
pub struct FermionState {
    m: usize,
    n: usize,
    amps: Vec<C64>,
}

impl FermionState {
    pub fn zeros(m: usize, n: usize) -> Result<Self> {
        if n > m {
            return Err(Error::InvalidParameter(format!("n = {n} exceeds m = {m}")));
        }
        if m > MAX_M {
            return Err(Error::InvalidParameter(format!("m = {m} exceeds {MAX_M}")));
        }
        Ok(Self { m, n, amps: vec![C64::zero(); binomial(m, n)] })
    }

    pub fn from_amps(m: usize, n: usize, amps: Vec<C64>) -> Result<Self> {
        let mut s = Self::zeros(m, n)?;
        if amps.len() != s.amps.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} amplitudes for C({m}, {n}), got {}",
                s.amps.len(),
                amps.len()
            )));
        }
        s.amps = amps;
        Ok(s)
    }

    /// The Slater determinant `|i_1 ∧ … ∧ i_n⟩` for 1-based indices.
    pub fn basis(m: usize, indices: &[usize]) -> Result<Self> {
        let c = Combination::new(m, indices.to_vec())?;
        let mut s = Self::zeros(m, c.n())?;
        s.amps[c.rank()] = C64::new(1.0, 0.0);
        Ok(s)
    }

    /// Build a state from `(indices, amplitude)` pairs; repeated tuples add.
    pub fn from_terms(m: usize, n: usize, terms: &[(&[usize], C64)]) -> Result<Self> {
        let mut s = Self::zeros(m, n)?;
        for (idx, a) in terms {
            let c = Combination::new(m, idx.to_vec())?;
            if c.n() != n {
                return Err(Error::DimensionMismatch(format!("term {c} is not an {n}-tuple")));
            }
            s.amps[c.rank()] += *a;
        }
        Ok(s)
    }

    /// `v_1 ∧ v_2 ∧ … ∧ v_k` for vectors given in the computational basis.
    pub fn wedge_of_vectors(m: usize, vectors: &[Vec<C64>]) -> Result<Self> {
        let mut acc = Self::zeros(m, 0)?;
        acc.amps[0] = C64::new(1.0, 0.0);
        for v in vectors {
            acc = acc.wedge(&Self::one_vector(v)?)?;
        }
        Ok(acc)
    }

    pub fn one_vector(v: &[C64]) -> Result<Self> {
        Self::from_amps(v.len(), 1, v.to_vec())
    }

    /// Independent standard complex Gaussians per amplitude, normalized.
    pub fn random<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<Self> {
        let mut s = Self::zeros(m, n)?;
        for a in s.amps.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *a = C64::new(re, im);
        }
        s.normalize()?;
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn amp(&self, indices: &[usize]) -> Result<C64> {
        let c = Combination::new(self.m, indices.to_vec())?;
        if c.n() != self.n {
            return Err(Error::DimensionMismatch(format!("{c} is not an {}-tuple", self.n)));
        }
        Ok(self.amps[c.rank()])
    }

    pub fn set_amp(&mut self, indices: &[usize], value: C64) -> Result<()> {
        let c = Combination::new(self.m, indices.to_vec())?;
        if c.n() != self.n {
            return Err(Error::DimensionMismatch(format!("{c} is not an {}-tuple", self.n)));
        }
        self.amps[c.rank()] = value;
        Ok(())
    }

    /// Basis masks aligned with [`amps`](Self::amps).
    pub fn basis_masks(&self) -> Vec<u64> {
        combination_masks(self.m, self.n)
    }

    /// Nonzero terms as `(combination, amplitude)`.
    pub fn terms(&self) -> impl Iterator<Item = (Combination, C64)> + '_ {
        let masks = self.basis_masks();
        self.amps
            .iter()
            .zip(masks)
            .filter(|(a, _)| !a.is_zero())
            .map(move |(a, mask)| (Combination::from_mask(self.m, mask), *a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(|a| a.is_zero())
    }

    pub fn normalize(&mut self) -> Result<()> {
        let nrm = self.norm();
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::DegenerateInput("cannot normalize a zero state"));
        }
        for a in self.amps.iter_mut() {
            *a /= nrm;
        }
        Ok(())
    }

    pub fn normalized(&self) -> Result<Self> {
        let mut s = self.clone();
        s.normalize()?;
        Ok(s)
    }

    pub fn scale(&self, z: C64) -> Self {
        Self { m: self.m, n: self.n, amps: self.amps.iter().map(|a| a * z).collect() }
    }

    /// `‖self − other‖`, requiring identical shape.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "(m, n) = ({}, {}) vs ({}, {})",
                self.m, self.n, other.m, other.n
            )));
        }
        Ok(())
    }

    fn check_same_m(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(format!("m = {} vs m = {}", self.m, other.m)));
        }
        Ok(())
    }

    /// Exterior product `self ∧ other`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same_m(other)?;
        let n = self.n + other.n;
        if n > self.m {
            return Err(Error::DimensionMismatch(format!(
                "{} + {} particles do not fit in m = {}",
                self.n, other.n, self.m
            )));
        }
        let mut out = Self::zeros(self.m, n)?;
        let left = self.basis_masks();
        let right = other.basis_masks();
        for (a, &s) in self.amps.iter().zip(&left) {
            if a.is_zero() {
                continue;
            }
            for (b, &t) in other.amps.iter().zip(&right) {
                if b.is_zero() || s & t != 0 {
                    continue;
                }
                let sign = wedge_sign(s, t);
                out.amps[rank_mask(self.m, s | t)] += a * b * sign;
            }
        }
        Ok(out)
    }

    /// Hermitian inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_shape(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Partial inner product `⟨self|other⟩ ∈ ∧^{N−p} V` for a `p`-vector
    /// `self` and an `N`-vector `other`. Antilinear in `self`.
    ///
    /// On basis elements `⟨S|T⟩ = ε |T∖S⟩` when `S ⊆ T`, where `ε` is the sign
    /// of the permutation listing `T` as `(S, T∖S)` with both parts increasing.
    pub fn partial_inner(&self, other: &Self) -> Result<Self> {
        self.check_same_m(other)?;
        if self.n > other.n {
            return Err(Error::DimensionMismatch(format!(
                "cannot contract a {}-vector into a {}-vector",
                self.n, other.n
            )));
        }
        let mut out = Self::zeros(self.m, other.n - self.n)?;
        let left = self.basis_masks();
        let right = other.basis_masks();
        for (a, &s) in self.amps.iter().zip(&left) {
            if a.is_zero() {
                continue;
            }
            let ac = a.conj();
            for (b, &t) in other.amps.iter().zip(&right) {
                if b.is_zero() || s & t != s {
                    continue;
                }
                let rest = t & !s;
                let sign = contraction_sign(s, rest);
                out.amps[rank_mask(self.m, rest)] += ac * b * sign;
            }
        }
        Ok(out)
    }

    /// Interior product with a single vector `|x⟩`.
    pub fn contract_vector(&self, x: &[C64]) -> Result<Self> {
        Self::one_vector(x)?.partial_inner(self)
    }
}

/// Sign of sorting the concatenation `(S, T)` of two disjoint index sets.
#[inline]
pub(crate) fn wedge_sign(s: u64, t: u64) -> f64 {
    let mut inv = 0u32;
    let mut tt = t;
    while tt != 0 {
        let bit = tt.trailing_zeros() as usize;
        tt &= tt - 1;
        inv += (s >> bit).count_ones();
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sign of listing `S ∪ R` as `(S, R)`, both increasing; `S ∩ R = ∅`.
#[inline]
pub(crate) fn contraction_sign(s: u64, rest: u64) -> f64 {
    let mut inv = 0u32;
    let mut ss = s;
    while ss != 0 {
        let bit = ss.trailing_zeros() as usize;
        ss &= ss - 1;
        inv += bits_below(rest, bit);
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Add for &FermionState {
    type Output = FermionState;

    fn add(self, rhs: Self) -> FermionState {
        assert_eq!((self.m, self.n), (rhs.m, rhs.n), "shape mismatch in state addition");
        FermionState {
            m: self.m,
            n: self.n,
            amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &FermionState {
    type Output = FermionState;

    fn sub(self, rhs: Self) -> FermionState {
        assert_eq!((self.m, self.n), (rhs.m, rhs.n), "shape mismatch in state subtraction");
        FermionState {
            m: self.m,
            n: self.n,
            amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<C64> for &FermionState {
    type Output = FermionState;

    fn mul(self, z: C64) -> FermionState {
        self.scale(z)
    }
}

/// On-disk form of a state: 1-based index tuples with real and imaginary
/// parts. Omitted tuples are zero.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct StateFile {
    pub m: usize,
    pub n: usize,
    pub amps: Vec<AmpRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct AmpRecord {
    pub indices: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

impl From<&FermionState> for StateFile {
    fn from(s: &FermionState) -> Self {
        let amps = s
            .amps
            .iter()
            .zip(s.basis_masks())
            .filter(|(a, _)| a.re.to_bits() != 0 || a.im.to_bits() != 0)
            .map(|(a, mask)| AmpRecord {
                indices: Combination::from_mask(s.m, mask).indices().to_vec(),
                re: a.re,
                im: a.im,
            })
            .collect();
        StateFile { m: s.m, n: s.n, amps }
    }
}

impl TryFrom<&StateFile> for FermionState {
    type Error = Error;

    fn try_from(f: &StateFile) -> Result<Self> {
        let mut s = FermionState::zeros(f.m, f.n)?;
        let mut seen = vec![false; s.dim()];
        for rec in &f.amps {
            let c = Combination::new(f.m, rec.indices.clone())?;
            if c.n() != f.n {
                return Err(Error::Format(format!("record {c} is not an {}-tuple", f.n)));
            }
            if !rec.re.is_finite() || !rec.im.is_finite() {
                return Err(Error::Format(format!("non-finite amplitude at {c}")));
            }
            let r = rank_mask(f.m, indices_mask(c.indices()));
            if seen[r] {
                return Err(Error::Format(format!("duplicate record for {c}")));
            }
            seen[r] = true;
            s.amps[r] = C64::new(rec.re, rec.im);
        }
        Ok(s)
    }
}

impl FermionState {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StateFile::from(self)).expect("state serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: StateFile = serde_json::from_str(text)?;
        FermionState::try_from(&f)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
