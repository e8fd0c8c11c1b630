use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::multilinear::{binomial, combination_masks, HermitianMatrix};
use crate::{Error, FermionState, Result, UnitaryMatrix, C64};

/// Coefficients below this fraction of `‖K‖_F` count as zero.
const RANK_CUTOFF: f64 = 1e-10;

/// The antisymmetric coefficient matrix of a 2-vector: `|i∧j⟩ ↦ E_ij − E_ji`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntisymMatrix {
    entries: DMatrix<C64>,
}

impl AntisymMatrix {
    pub fn from_two_vector(psi: &FermionState) -> Result<Self> {
        if psi.n() != 2 {
            return Err(Error::InvalidParameter(format!("expected a 2-vector, got n = {}", psi.n())));
        }
        let m = psi.m();
        let mut k = DMatrix::zeros(m, m);
        for (c, a) in psi.terms() {
            let (i, j) = (c.indices()[0] - 1, c.indices()[1] - 1);
            k[(i, j)] = a;
            k[(j, i)] = -a;
        }
        Ok(Self { entries: k })
    }

    /// Antisymmetric part `(A − Aᵀ)/2`.
    pub fn from_matrix(a: &DMatrix<C64>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch("antisymmetric matrix must be square".into()));
        }
        Ok(Self { entries: (a - a.transpose()) * C64::new(0.5, 0.0) })
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn to_two_vector(&self) -> Result<FermionState> {
        let m = self.dim();
        let amps = combination_masks(m, 2)
            .into_iter()
            .map(|mask| {
                let i = mask.trailing_zeros() as usize;
                let j = 63 - mask.leading_zeros() as usize;
                self.entries[(i, j)]
            })
            .collect();
        debug_assert_eq!(binomial(m, 2), combination_masks(m, 2).len());
        FermionState::from_amps(m, 2, amps)
    }

    /// `U K Uᵀ`, the coefficient matrix of `∧²U ψ`.
    pub fn transform(&self, u: &UnitaryMatrix) -> Self {
        Self { entries: u.entries() * &self.entries * u.entries().transpose() }
    }
}

/// `U ψ = Σ c_i |2i−1 ∧ 2i⟩` with `c_1 ≥ … ≥ c_k > 0`.
#[derive(Clone, Debug)]
pub struct TakagiForm {
    pub coeffs: Vec<f64>,
    pub transform: UnitaryMatrix,
}

impl TakagiForm {
    /// `Σ c_i |2i−1 ∧ 2i⟩` in dimension `m`.
    pub fn canonical_state(&self) -> Result<FermionState> {
        let m = self.transform.dim();
        let mut s = FermionState::zeros(m, 2)?;
        for (i, &c) in self.coeffs.iter().enumerate() {
            s.set_amp(&[2 * i + 1, 2 * i + 2], C64::new(c, 0.0))?;
        }
        Ok(s)
    }
}

fn project_out(v: &mut DVector<C64>, basis: &[DVector<C64>]) {
    // twice for stability
    for _ in 0..2 {
        for b in basis {
            let p = b.dotc(v);
            *v -= b * p;
        }
    }
}

/// Antisymmetric Takagi form. Eigenvectors `u` of `K K†` are taken in
/// decreasing order of eigenvalue and made orthogonal to earlier picks;
/// each yields the pair `(u, −K ū / c)` with `c = ‖K ū‖`. The partner of a
/// vector lies in the same eigenspace, so within a degenerate eigenspace
/// the member with the largest component outside the pairs found so far
/// is used next.
pub fn takagi_2vector(psi: &FermionState) -> Result<TakagiForm> {
    if psi.n() != 2 {
        return Err(Error::InvalidParameter(format!("Takagi form needs n = 2, got n = {}", psi.n())));
    }
    if psi.is_zero() {
        return Err(Error::DegenerateInput("Takagi form of the zero 2-vector"));
    }
    let k = AntisymMatrix::from_two_vector(psi)?;
    let kk = k.entries();
    let m = k.dim();
    let scale = kk.norm();
    let h = HermitianMatrix::from_nearly_hermitian(kk * kk.adjoint());
    let (vals, vecs) = h.eigen();

    // clusters of numerically equal eigenvalues, in decreasing order
    let tol = 1e-9 * vals[0].max(f64::MIN_POSITIVE);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for idx in 0..m {
        match clusters.last_mut() {
            Some(cl) if (vals[cl[0]] - vals[idx]).abs() <= tol => cl.push(idx),
            _ => clusters.push(vec![idx]),
        }
    }

    let mut chosen: Vec<DVector<C64>> = Vec::new();
    let mut pairs: Vec<(f64, usize, DVector<C64>, DVector<C64>)> = Vec::new();
    'clusters: for cl in clusters {
        let mut left = cl;
        while !left.is_empty() {
            // the member with the largest part outside the chosen span
            let (pos, mut u, nrm) = left
                .iter()
                .enumerate()
                .map(|(p, &idx)| {
                    let mut u: DVector<C64> = vecs.column(idx).into_owned();
                    project_out(&mut u, &chosen);
                    let n = u.norm();
                    (p, u, n)
                })
                .max_by(|a, b| a.2.total_cmp(&b.2).then(b.0.cmp(&a.0)))
                .expect("nonempty");
            if nrm < 1e-3 {
                break;
            }
            let idx = left.remove(pos);
            u /= C64::new(nrm, 0.0);
            // fix the phase: largest component real and positive
            let lead = u.iter().copied().fold(C64::zero(), |a, z| if z.norm() > a.norm() * (1.0 + 1e-12) { z } else { a });
            u *= lead.conj() / lead.norm();
            let w = kk * u.map(|z| z.conj());
            let c = w.norm();
            if c <= RANK_CUTOFF * scale {
                break 'clusters;
            }
            let mut f = -w / C64::new(c, 0.0);
            project_out(&mut f, &chosen);
            let fn_ = f.norm();
            f /= C64::new(fn_, 0.0);
            chosen.push(u.clone());
            chosen.push(f.clone());
            pairs.push((c, idx, u, f));
            if 2 * pairs.len() + 2 > m {
                break 'clusters;
            }
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    // orthonormal completion from the standard basis
    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(m);
    for (_, _, u, f) in &pairs {
        cols.push(u.clone());
        cols.push(f.clone());
    }
    for e in 0..m {
        if cols.len() == m {
            break;
        }
        let mut v = DVector::from_fn(m, |i, _| if i == e { C64::new(1.0, 0.0) } else { C64::zero() });
        project_out(&mut v, &cols);
        let nrm = v.norm();
        if nrm > 1e-6 {
            cols.push(v / C64::new(nrm, 0.0));
        }
    }
    let f = DMatrix::from_columns(&cols);
    let transform = UnitaryMatrix::with_tolerance(f.adjoint(), 1e-9)?;
    Ok(TakagiForm { coeffs: pairs.iter().map(|p| p.0).collect(), transform })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilinear::apply_unitary;
    use crate::rng::seeded;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn check(psi: &FermionState, expect: &[f64]) -> TakagiForm {
        let t = takagi_2vector(psi).unwrap();
        assert_eq!(t.coeffs.len(), expect.len(), "{:?}", t.coeffs);
        for (a, b) in t.coeffs.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9, "{:?} vs {expect:?}", t.coeffs);
        }
        let out = apply_unitary(&t.transform, psi).unwrap();
        assert!(out.distance(&t.canonical_state().unwrap()).unwrap() < 1e-9 * psi.norm());
        t
    }

    #[test]
    fn already_canonical() {
        let psi = FermionState::from_terms(4, 2, &[(&[1, 2], c(3.0)), (&[3, 4], c(1.0))]).unwrap();
        let t = check(&psi, &[3.0, 1.0]);
        let id = DMatrix::<C64>::identity(4, 4);
        assert!((t.transform.entries() - id).norm() < 1e-12);
    }

    #[test]
    fn rotated_recovers() {
        let mut rng = seeded(5);
        for m in [4, 5, 6, 7] {
            let base = FermionState::from_terms(m, 2, &[(&[1, 2], c(2.0)), (&[3, 4], c(1.0))]).unwrap();
            let u = UnitaryMatrix::haar_random(m, &mut rng);
            check(&apply_unitary(&u, &base).unwrap(), &[2.0, 1.0]);
        }
    }

    #[test]
    fn degenerate_pairs() {
        // three equal pairs, rotated
        let mut rng = seeded(6);
        let base = FermionState::from_terms(6, 2, &[(&[1, 2], c(1.0)), (&[3, 4], c(1.0)), (&[5, 6], c(1.0))]).unwrap();
        let u = UnitaryMatrix::haar_random(6, &mut rng);
        check(&apply_unitary(&u, &base).unwrap(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn antisym_roundtrip() {
        let mut rng = seeded(7);
        let psi = FermionState::random(5, 2, &mut rng).unwrap();
        let k = AntisymMatrix::from_two_vector(&psi).unwrap();
        assert_eq!(k.to_two_vector().unwrap(), psi);
        assert!((k.entries() + k.entries().transpose()).norm() == 0.0);
        let u = UnitaryMatrix::haar_random(5, &mut rng);
        let moved = k.transform(&u).to_two_vector().unwrap();
        assert!(moved.distance(&apply_unitary(&u, &psi).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(takagi_2vector(&FermionState::zeros(4, 2).unwrap()).is_err());
        assert!(takagi_2vector(&FermionState::basis(4, &[1, 2, 3]).unwrap()).is_err());
    }
}
