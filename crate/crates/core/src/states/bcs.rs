use nalgebra::DMatrix;

use crate::multilinear::{binomial, combination_masks, rdm2, two_vector_coords};
use crate::{Error, FermionState, Result, UnitaryMatrix, C64};

/// `ψ_{N,M}`: unit coefficients on every configuration made of `N/2` full
/// standard pairs.
pub fn bcs_state(n: usize, m: usize) -> Result<FermionState> {
    if n % 2 != 0 || m % 2 != 0 || n < 2 || m < n {
        return Err(Error::InvalidParameter(format!("BCS state needs even 2 <= N <= M, got N = {n}, M = {m}")));
    }
    let k = m / 2;
    let mut psi = FermionState::zeros(m, n)?;
    for pairs in combination_masks(k, n / 2) {
        let idx: Vec<usize> = (0..k).filter(|b| pairs >> b & 1 == 1).flat_map(|b| [2 * b + 1, 2 * b + 2]).collect();
        psi.set_amp(&idx, C64::new(1.0, 0.0))?;
    }
    debug_assert_eq!(psi.norm_sqr().round() as usize, binomial(k, n / 2));
    Ok(psi)
}

/// The same amplitudes in a space of `m_new ≥ m` modes.
pub fn extend_modes(psi: &FermionState, m_new: usize) -> Result<FermionState> {
    if m_new < psi.m() {
        return Err(Error::InvalidParameter(format!("cannot shrink from {} to {m_new} modes", psi.m())));
    }
    let mut out = FermionState::zeros(m_new, psi.n())?;
    for (c, a) in psi.terms() {
        out.set_amp(c.indices(), a)?;
    }
    Ok(out)
}

/// Block-diagonal unitary with the given 2×2 blocks (and a trailing 1 for odd `m`).
pub fn pair_block_unitary(m: usize, blocks: &[DMatrix<C64>]) -> Result<UnitaryMatrix> {
    if blocks.len() != m / 2 {
        return Err(Error::DimensionMismatch(format!("{} blocks for m = {m}", blocks.len())));
    }
    let mut all = blocks.to_vec();
    if m % 2 == 1 {
        all.push(DMatrix::identity(1, 1));
    }
    UnitaryMatrix::block_diagonal(&all)
}

/// Tolerance of [`sov_criterion`], relative to `‖ψ‖²`.
pub const CRITERION_TOL: f64 = 1e-10;

/// Fixed-basis single-occupancy test: `ρ12 |a_{2i−1} ∧ a_{2i}⟩ = 0` for
/// every pair, where `a_j` are the columns of `basis` (the standard basis if
/// `None`). A `true` answer means `ψ` is SOV in that basis.
pub fn sov_criterion(psi: &FermionState, basis: Option<&UnitaryMatrix>, tol: f64) -> Result<bool> {
    if psi.n() < 2 {
        return Err(Error::InvalidParameter(format!("criterion needs n >= 2, got n = {}", psi.n())));
    }
    let m = psi.m();
    if let Some(u) = basis {
        if u.dim() != m {
            return Err(Error::DimensionMismatch(format!("basis of size {} for m = {m}", u.dim())));
        }
    }
    let rho = rdm2(psi)?;
    let cut = tol * psi.norm_sqr();
    let col = |j: usize| match basis {
        Some(u) => u.column(j),
        None => (0..m).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect(),
    };
    for k in 0..m / 2 {
        let v = two_vector_coords(&col(2 * k), &col(2 * k + 1));
        let w = rho.apply(&v);
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > cut {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bcs_states() {
        let p = bcs_state(2, 6).unwrap();
        let want = FermionState::from_terms(
            6,
            2,
            &[(&[1, 2], C64::new(1.0, 0.0)), (&[3, 4], C64::new(1.0, 0.0)), (&[5, 6], C64::new(1.0, 0.0))],
        )
        .unwrap();
        assert_eq!(p, want);
        assert_eq!(bcs_state(4, 8).unwrap().terms().count(), 6);
        assert_eq!(bcs_state(4, 4).unwrap(), FermionState::basis(4, &[1, 2, 3, 4]).unwrap());
        assert!(bcs_state(3, 8).is_err());
        assert!(bcs_state(4, 7).is_err());
    }

    #[test]
    fn criterion_on_basis_states() {
        assert!(sov_criterion(&FermionState::basis(6, &[1, 3, 5]).unwrap(), None, CRITERION_TOL).unwrap());
        assert!(!sov_criterion(&FermionState::basis(6, &[1, 2, 3]).unwrap(), None, CRITERION_TOL).unwrap());
        assert!(sov_criterion(&FermionState::basis(4, &[1]).unwrap(), None, CRITERION_TOL).is_err());
    }
}
