//! One- and two-particle reduced density matrices and the support /
//! decomposability test built on them.

use nalgebra::DMatrix;

use super::combination::{binomial, combination_masks, mask_indices};
use super::{FermionState, HermitianMatrix};
use crate::{Error, Result, C64};

/// Default relative rank threshold for [`is_decomposable`].
pub const RANK_TOL: f64 = 1e-8;

fn gram(contractions: &[FermionState]) -> Result<HermitianMatrix> {
    let k = contractions.len();
    let mut g = DMatrix::<C64>::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            // (ρ)_{ab} = ⟨ι_b ψ | ι_a ψ⟩
            let v = contractions[b].inner(&contractions[a])?;
            g[(a, b)] = v;
            g[(b, a)] = v.conj();
        }
    }
    Ok(HermitianMatrix::from_nearly_hermitian(g))
}

fn basis_contractions(psi: &FermionState, p: usize) -> Result<Vec<FermionState>> {
    combination_masks(psi.m(), p)
        .into_iter()
        .map(|mask| {
            let idx: Vec<usize> = mask_indices(mask).collect();
            FermionState::basis(psi.m(), &idx)?.partial_inner(psi)
        })
        .collect()
}

/// `(ρ1)_{ab} = ⟨ι_b ψ | ι_a ψ⟩`, an `m × m` PSD matrix of trace `n‖ψ‖²`.
pub fn rdm1(psi: &FermionState) -> Result<HermitianMatrix> {
    if psi.is_zero() {
        return Err(Error::DegenerateInput("reduced density matrix of the zero state"));
    }
    if psi.n() < 1 {
        return Err(Error::InvalidParameter("rdm1 needs n ≥ 1".into()));
    }
    gram(&basis_contractions(psi, 1)?)
}

/// Two-particle reduced density matrix over the `C(m, 2)` pairs in
/// lexicographic order; trace `C(n, 2)‖ψ‖²`.
pub fn rdm2(psi: &FermionState) -> Result<HermitianMatrix> {
    if psi.n() < 2 {
        return Err(Error::InvalidParameter(format!("rdm2 needs n ≥ 2, got n = {}", psi.n())));
    }
    if psi.is_zero() {
        return Err(Error::DegenerateInput("reduced density matrix of the zero state"));
    }
    gram(&basis_contractions(psi, 2)?)
}

/// Coefficients of `a ∧ b` in the lexicographic basis of `∧² V`.
pub fn two_vector_coords(a: &[C64], b: &[C64]) -> Vec<C64> {
    let m = a.len();
    let mut out = Vec::with_capacity(binomial(m, 2));
    for i in 0..m {
        for j in i + 1..m {
            out.push(a[i] * b[j] - a[j] * b[i]);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Decomposability {
    pub decomposable: bool,
    /// Rank of `ρ1`, i.e. the dimension of the support.
    pub rank: usize,
    /// Orthonormal basis of the support (eigenvectors of `ρ1`).
    pub support: Vec<Vec<C64>>,
    pub eigenvalues: Vec<f64>,
}

/// `ψ` is a Slater determinant iff its support has dimension `n`. Eigenvalues
/// of `ρ1` below `tol·‖ψ‖²` count as zero.
pub fn is_decomposable(psi: &FermionState, tol: f64) -> Result<Decomposability> {
    let rho = rdm1(psi)?;
    let (vals, vecs) = rho.eigen();
    let cut = tol * psi.norm_sqr();
    let rank = vals.iter().filter(|&&l| l > cut).count();
    let support = (0..rank).map(|j| vecs.column(j).iter().copied().collect()).collect();
    Ok(Decomposability { decomposable: rank == psi.n(), rank, support, eigenvalues: vals })
}
