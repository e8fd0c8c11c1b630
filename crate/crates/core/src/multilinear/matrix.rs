use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result, C64};

/// Default tolerance on `‖U†U − I‖_max`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Default tolerance on `‖H − H†‖_max`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// An `m × m` unitary acting on the single-particle space.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    entries: DMatrix<C64>,
}

impl UnitaryMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(entries, UNITARY_TOL)
    }

    pub fn with_tolerance(entries: DMatrix<C64>, tol: f64) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let dev = unitarity_deviation(&entries);
        if !(dev <= tol) {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { entries })
    }

    /// Wraps a matrix the caller has constructed to be unitary.
    pub fn identity(m: usize) -> Self {
        Self { entries: DMatrix::identity(m, m) }
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}` (0-based).
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let m = perm.len();
        let mut seen = vec![false; m];
        let mut u = DMatrix::zeros(m, m);
        for (j, &i) in perm.iter().enumerate() {
            if i >= m || seen[i] {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
            seen[i] = true;
            u[(i, j)] = C64::one();
        }
        Ok(Self { entries: u })
    }

    /// Direct sum of square blocks along the diagonal.
    pub fn block_diagonal(blocks: &[DMatrix<C64>]) -> Result<Self> {
        let m: usize = blocks.iter().map(|b| b.nrows()).sum();
        let mut u = DMatrix::zeros(m, m);
        let mut off = 0;
        for b in blocks {
            if !b.is_square() {
                return Err(Error::DimensionMismatch("non-square block".into()));
            }
            u.view_mut((off, off), b.shape()).copy_from(b);
            off += b.nrows();
        }
        Self::new(u)
    }

    /// Haar-distributed unitary: QR of a complex Ginibre matrix with the
    /// phases of `R`'s diagonal folded back into `Q`.
    pub fn haar_random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let z = DMatrix::from_fn(m, m, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        });
        let qr = z.qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..m {
            let d = r[(j, j)];
            let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::one() };
            for i in 0..m {
                q[(i, j)] *= ph;
            }
        }
        Self { entries: q }
    }

    /// Haar-random element of `SU(2)`.
    pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> DMatrix<C64> {
        let u = Self::haar_random(2, rng).entries;
        let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
        let fix = det.sqrt().inv();
        u * fix
    }

    /// `exp(iH)` for Hermitian `H`, via its eigendecomposition.
    pub fn exp_i(h: &HermitianMatrix) -> Self {
        let eig = h.entries.clone().symmetric_eigen();
        let v = &eig.eigenvectors;
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(0.0, l).exp()));
        Self { entries: v * d * v.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self { entries: self.entries.adjoint() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { entries: &self.entries * &other.entries }
    }

    pub fn deviation(&self) -> f64 {
        unitarity_deviation(&self.entries)
    }

    /// Re-orthonormalize columns (modified Gram–Schmidt) to stop drift
    /// accumulating over long products.
    pub fn reunitarize(&mut self) {
        let m = self.dim();
        for j in 0..m {
            for k in 0..j {
                let proj: C64 = (0..m).map(|i| self.entries[(i, k)].conj() * self.entries[(i, j)]).sum();
                for i in 0..m {
                    let v = self.entries[(i, k)];
                    self.entries[(i, j)] -= proj * v;
                }
            }
            let nrm = self.entries.column(j).norm();
            for i in 0..m {
                self.entries[(i, j)] /= nrm;
            }
        }
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.entries.column(j).iter().copied().collect()
    }
}

pub(crate) fn unitarity_deviation(u: &DMatrix<C64>) -> f64 {
    let g = u.adjoint() * u;
    let mut dev = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { C64::one() } else { C64::zero() };
            let d = (g[(i, j)] - target).norm();
            if d.is_nan() {
                return f64::NAN;
            }
            dev = dev.max(d);
        }
    }
    dev
}

/// A Hermitian matrix, e.g. a reduced density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<C64>,
}

impl HermitianMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch("Hermitian matrix must be square".into()));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        let dev = (&entries - entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(dev <= HERMITIAN_TOL * scale) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { entries })
    }

    /// Symmetrizes `(A + A†)/2`; for matrices Hermitian up to rounding.
    pub(crate) fn from_nearly_hermitian(a: DMatrix<C64>) -> Self {
        let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        Self { entries: h }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    /// Eigenvalues in decreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().0
    }

    /// Eigenvalues (decreasing) and matching orthonormal eigenvectors as
    /// columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        let eig = self.entries.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
        let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vecs = DMatrix::from_fn(self.dim(), self.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
        (vals, vecs)
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let v = nalgebra::DVector::from_column_slice(x);
        (&self.entries * v).iter().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn haar_is_unitary() {
        let mut rng = seeded(1);
        for m in 1..9 {
            let u = UnitaryMatrix::haar_random(m, &mut rng);
            assert!(u.deviation() < 1e-12);
        }
    }

    #[test]
    fn su2_has_unit_determinant() {
        let mut rng = seeded(2);
        for _ in 0..20 {
            let u = UnitaryMatrix::random_su2(&mut rng);
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            assert!((det - C64::one()).norm() < 1e-12);
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let h = HermitianMatrix::new(DMatrix::zeros(4, 4)).unwrap();
        assert!((UnitaryMatrix::exp_i(&h).entries() - DMatrix::<C64>::identity(4, 4)).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_unitary() {
        let a = DMatrix::from_element(2, 2, C64::one());
        assert!(matches!(UnitaryMatrix::new(a), Err(Error::NotUnitary(_))));
        assert!(UnitaryMatrix::permutation(&[0, 0]).is_err());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = DMatrix::<C64>::zeros(2, 2);
        a[(0, 1)] = C64::one();
        assert!(HermitianMatrix::new(a).is_err());
    }
}
