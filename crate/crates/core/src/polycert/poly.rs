//! Exact sparse multivariate polynomials over the integers.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exponents of `x_1 … x_m` in one monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zeros(m: usize) -> Self {
        Self(vec![0; m])
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The staircase `x_1^0 x_2^1 ⋯ x_m^{m−1}`.
    pub fn staircase(m: usize) -> Self {
        Self((0..m as u32).collect())
    }

    /// If the exponents are a permutation of `0..m`, the sign of that
    /// permutation (parity of inversions); otherwise `None`.
    pub fn permutation_sign(&self) -> Option<i32> {
        let m = self.0.len();
        let mut seen = vec![false; m];
        for &e in &self.0 {
            let e = e as usize;
            if e >= m || seen[e] {
                return None;
            }
            seen[e] = true;
        }
        let mut inv = 0usize;
        for i in 0..m {
            for j in i + 1..m {
                if self.0[i] > self.0[j] {
                    inv += 1;
                }
            }
        }
        Some(if inv % 2 == 0 { 1 } else { -1 })
    }

    /// Parse `x1*x3^2` (or `1`) in `m` variables.
    pub fn parse(m: usize, text: &str) -> Result<Self> {
        let mut e = Self::zeros(m);
        let text = text.trim();
        if text == "1" {
            return Ok(e);
        }
        for factor in text.split('*') {
            let bad = || Error::InvalidParameter(format!("cannot read monomial factor {factor:?}"));
            let rest = factor.trim().strip_prefix('x').ok_or_else(bad)?;
            let (var, pow) = match rest.split_once('^') {
                Some((v, p)) => (v, p.parse::<u32>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let var: usize = var.parse().map_err(|_| bad())?;
            if var == 0 || var > m {
                return Err(Error::InvalidParameter(format!("variable x{var} outside x1..x{m}")));
            }
            e.0[var - 1] += pow;
        }
        Ok(e)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// `x_{i_1} + x_{i_2} + …` with unit coefficients (1-based variables).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearForm(pub Vec<usize>);

impl LinearForm {
    pub fn vars(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "x{v}")?;
        }
        write!(f, ")")
    }
}

/// Polynomial in `m` variables as a map from exponent vectors to nonzero
/// integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    m: usize,
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl MultiPoly {
    pub fn zero(m: usize) -> Self {
        Self { m, terms: BTreeMap::new() }
    }

    pub fn one(m: usize) -> Self {
        Self::monomial(ExponentVector::zeros(m), BigInt::one())
    }

    pub fn monomial(e: ExponentVector, c: BigInt) -> Self {
        let m = e.m();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { m, terms }
    }

    pub fn linear(m: usize, form: &LinearForm) -> Result<Self> {
        let mut p = Self::zero(m);
        for &v in form.vars() {
            if v == 0 || v > m {
                return Err(Error::InvalidParameter(format!("variable x{v} outside 1..={m}")));
            }
            let mut e = ExponentVector::zeros(m);
            e.0[v - 1] = 1;
            p.add_term(e, BigInt::one());
        }
        Ok(p)
    }

    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (ExponentVector, BigInt)>) -> Result<Self> {
        let mut p = Self::zero(m);
        for (e, c) in terms {
            if e.m() != m {
                return Err(Error::DimensionMismatch(format!("exponent vector of length {} in {m} variables", e.m())));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, e: ExponentVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentVector) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.degree() == d)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    /// Substitute `x_var = 0` (1-based), keeping the variable count.
    pub fn set_zero(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e.0[var - 1] == 0).map(|(e, c)| (e.clone(), c.clone())).collect();
        Self { m: self.m, terms }
    }

    /// Drop variable `x_var` (1-based), which must not occur.
    pub fn remove_var(&self, var: usize) -> Result<Self> {
        let mut out = Self::zero(self.m - 1);
        for (e, c) in &self.terms {
            if e.0[var - 1] != 0 {
                return Err(Error::InvalidParameter(format!("x{var} still occurs")));
            }
            let mut v = e.0.clone();
            v.remove(var - 1);
            out.add_term(ExponentVector(v), c.clone());
        }
        Ok(out)
    }

    /// Divide by the monomial `e`, which must divide every term.
    pub fn divide_monomial(&self, e: &ExponentVector) -> Result<Self> {
        let mut out = Self::zero(self.m);
        for (t, c) in &self.terms {
            if t.0.iter().zip(&e.0).any(|(a, b)| a < b) {
                return Err(Error::InvalidParameter(format!("{e} does not divide {t}")));
            }
            out.add_term(ExponentVector(t.0.iter().zip(&e.0).map(|(a, b)| a - b).collect()), c.clone());
        }
        Ok(out)
    }

    /// Relabel variables: `x_i ↦ x_{perm[i]}` (0-based `perm`).
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.m);
        for (e, c) in &self.terms {
            let mut v = vec![0; self.m];
            for (i, &x) in e.0.iter().enumerate() {
                v[perm[i]] = x;
            }
            out.add_term(ExponentVector(v), c.clone());
        }
        out
    }

    /// `⟨self, p⟩` with monomials orthonormal and
    /// `p = ∏_{i<j}(x_j − x_i) = Σ_σ sgn(σ) x_{σ1}^0 ⋯ x_{σm}^{m−1}`,
    /// evaluated by scanning every term. Only degree-`m(m−1)/2` terms can
    /// contribute.
    pub fn vandermonde_pairing(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            if let Some(s) = e.permutation_sign() {
                if s > 0 {
                    acc += c;
                } else {
                    acc -= c;
                }
            }
        }
        acc
    }

    /// The Vandermonde polynomial `∏_{1≤i<j≤m}(x_j − x_i)`, fully expanded.
    pub fn vandermonde(m: usize) -> Self {
        let mut p = Self::one(m);
        for i in 0..m {
            for j in i + 1..m {
                let mut f = Self::zero(m);
                let mut ej = ExponentVector::zeros(m);
                ej.0[j] = 1;
                let mut ei = ExponentVector::zeros(m);
                ei.0[i] = 1;
                f.add_term(ej, BigInt::one());
                f.add_term(ei, -BigInt::one());
                p = &p * &f;
            }
        }
        p
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;

    fn add(self, rhs: Self) -> MultiPoly {
        assert_eq!(self.m, rhs.m);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: Self) -> MultiPoly {
        assert_eq!(self.m, rhs.m);
        let mut acc: BTreeMap<ExponentVector, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ExponentVector(ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect());
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { m: self.m, terms: acc }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{e}")?;
        }
        Ok(())
    }
}
