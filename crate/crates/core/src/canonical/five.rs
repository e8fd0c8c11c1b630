use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use super::takagi_2vector;
use crate::multilinear::{combination_masks, HermitianMatrix};
use crate::{Error, FermionState, Result, UnitaryMatrix, C64};

/// Relative size of the smallest singular value of `x ↦ ψ∧x` accepted as
/// a kernel.
const KERNEL_TOL: f64 = 1e-8;

/// Canonical form of a 3-vector in dimension five:
/// `∧³U ψ = (c1 |1∧2⟩ + c2 |3∧4⟩) ∧ |5⟩` with `c1 ≥ c2 ≥ 0`.
#[derive(Clone, Debug)]
pub struct Canonical35 {
    pub c1: f64,
    pub c2: f64,
    pub transform: UnitaryMatrix,
}

impl Canonical35 {
    pub fn canonical_state(&self) -> Result<FermionState> {
        FermionState::from_terms(5, 3, &[(&[1, 2, 5], C64::new(self.c1, 0.0)), (&[3, 4, 5], C64::new(self.c2, 0.0))])
    }
}

/// Unitary whose last row is `v†`, so that `W v = e_m`.
fn rotate_to_last(v: &DVector<C64>) -> Result<UnitaryMatrix> {
    let m = v.len();
    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(m);
    for e in 0..m {
        let mut w = DVector::from_fn(m, |i, _| if i == e { C64::new(1.0, 0.0) } else { C64::zero() });
        for _ in 0..2 {
            for b in cols.iter().chain(std::iter::once(v)) {
                let p = b.dotc(&w);
                w -= b * p;
            }
        }
        let n = w.norm();
        if n > 1e-6 {
            cols.push(w / C64::new(n, 0.0));
        }
        if cols.len() == m - 1 {
            break;
        }
    }
    cols.push(v.clone());
    UnitaryMatrix::with_tolerance(DMatrix::from_columns(&cols).adjoint(), 1e-9)
}

/// The vector `v` spanning the kernel of `x ↦ ψ∧x` satisfies `ψ = φ∧v`.
/// Rotating `v` to `e5` leaves a 2-vector on the first four modes, whose
/// Takagi form gives `(c1, c2)`.
pub fn canonical_3in5(psi: &FermionState) -> Result<Canonical35> {
    if psi.m() != 5 || psi.n() != 3 {
        return Err(Error::InvalidParameter(format!("need m = 5, n = 3, got m = {}, n = {}", psi.m(), psi.n())));
    }
    if psi.is_zero() {
        return Err(Error::DegenerateInput("canonical form of the zero 3-vector"));
    }
    // columns ψ∧e_i in ∧⁴C⁵
    let mut a = DMatrix::<C64>::zeros(5, 5);
    for i in 0..5 {
        let w = psi.wedge(&FermionState::basis(5, &[i + 1])?)?;
        for (r, z) in w.amps().iter().enumerate() {
            a[(r, i)] = *z;
        }
    }
    let gram = HermitianMatrix::from_nearly_hermitian(a.adjoint() * &a);
    let (vals, vecs) = gram.eigen();
    if vals[4] > KERNEL_TOL * psi.norm_sqr() {
        return Err(Error::DegenerateInput("x ↦ ψ∧x has no numerical kernel"));
    }
    let v: DVector<C64> = vecs.column(4).into_owned();
    let w = rotate_to_last(&v)?;
    let rotated = crate::multilinear::apply_unitary(&w, psi)?;

    let mut phi = FermionState::zeros(4, 2)?;
    for mask in combination_masks(4, 2) {
        let i = mask.trailing_zeros() as usize + 1;
        let j = 63 - mask.leading_zeros() as usize + 1;
        phi.set_amp(&[i, j], rotated.amp(&[i, j, 5])?)?;
    }
    let t = takagi_2vector(&phi)?;
    let mut blocks = t.transform.entries().clone().resize(5, 5, C64::zero());
    blocks[(4, 4)] = C64::new(1.0, 0.0);
    let transform = UnitaryMatrix::with_tolerance(blocks * w.entries(), 1e-9)?;
    let c1 = t.coeffs[0];
    let c2 = t.coeffs.get(1).copied().unwrap_or(0.0);
    Ok(Canonical35 { c1, c2, transform })
}
