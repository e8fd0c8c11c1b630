use crate::multilinear::rdm1;
use crate::{Error, FermionState, Result, C64};

/// Tolerance on the eigenvalue pairing and on the normalization.
pub const PAIRING_TOL: f64 = 1e-10;

/// One-particle spectrum of `a e235 + b e145 + c e136 + d e246 + z e135`.
#[derive(Clone, Debug, PartialEq)]
pub struct NrepSpectrum {
    /// Decreasing; they sum to 3.
    pub eigenvalues: [f64; 6],
    /// `λ_i + λ_{7−i}` for `i = 1, 2, 3`.
    pub pair_sums: [f64; 3],
}

/// The five-term normal form for three fermions in six modes.
pub fn nrep_state(a: f64, b: f64, c: f64, d: f64, z: C64) -> Result<FermionState> {
    let r = |x: f64| C64::new(x, 0.0);
    FermionState::from_terms(6, 3, &[(&[2, 3, 5], r(a)), (&[1, 4, 5], r(b)), (&[1, 3, 6], r(c)), (&[2, 4, 6], r(d)), (&[1, 3, 5], z)])
}

/// Eigenvalues of `ρ1` for the normal form, checking `λ_i + λ_{7−i} = 1`.
pub fn nrep_spectrum(a: f64, b: f64, c: f64, d: f64, z: C64) -> Result<NrepSpectrum> {
    if [a, b, c, d].iter().any(|&x| !(x >= 0.0)) || !z.norm().is_finite() {
        return Err(Error::InvalidParameter(format!("need a, b, c, d >= 0, got ({a}, {b}, {c}, {d})")));
    }
    let norm = a * a + b * b + c * c + d * d + z.norm_sqr();
    if (norm - 1.0).abs() > PAIRING_TOL {
        return Err(Error::InvalidParameter(format!("coefficients must be normalized, got squared norm {norm}")));
    }
    let rho = rdm1(&nrep_state(a, b, c, d, z)?)?;
    let vals = rho.eigenvalues();
    let eigenvalues: [f64; 6] = vals.try_into().map_err(|_| Error::Numerical("expected six eigenvalues".into()))?;
    let pair_sums = [0, 1, 2].map(|i| eigenvalues[i] + eigenvalues[5 - i]);
    if let Some(s) = pair_sums.iter().find(|s| (*s - 1.0).abs() > PAIRING_TOL) {
        return Err(Error::Numerical(format!("eigenvalue pairing violated: sum {s}")));
    }
    Ok(NrepSpectrum { eigenvalues, pair_sums })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use nalgebra::DMatrix;
    use rand::Rng;

    /// The block matrix `R_a ⊕ R_b ⊕ R_c` written out entrywise.
    fn printed(a: f64, b: f64, c: f64, d: f64, z: C64) -> DMatrix<C64> {
        let r = |x: f64| C64::new(x, 0.0);
        let z2 = z.norm_sqr();
        let mut m = DMatrix::zeros(6, 6);
        let blocks = [(b * b + c * c + z2, a, a * a + d * d), (c * c + a * a + z2, b, b * b + d * d), (a * a + b * b + z2, c, c * c + d * d)];
        for (k, (p, x, q)) in blocks.into_iter().enumerate() {
            m[(2 * k, 2 * k)] = r(p);
            m[(2 * k, 2 * k + 1)] = z * x;
            m[(2 * k + 1, 2 * k)] = z.conj() * x;
            m[(2 * k + 1, 2 * k + 1)] = r(q);
        }
        m
    }

    #[test]
    fn slater_spectrum() {
        let s = nrep_spectrum(1.0, 0.0, 0.0, 0.0, C64::new(0.0, 0.0)).unwrap();
        assert_eq!(s.eigenvalues.map(|x| (x * 1e12).round() / 1e12), [1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn density_matrix_has_block_form() {
        let mut rng = seeded(50);
        for _ in 0..20 {
            let v: Vec<f64> = (0..6).map(|_| rng.random::<f64>()).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let (a, b, c, d) = (v[0] / n, v[1] / n, v[2] / n, v[3] / n);
            let z = C64::new(v[4] / n, v[5] / n);
            let rho = rdm1(&nrep_state(a, b, c, d, z).unwrap()).unwrap();
            assert!((rho.entries() - printed(a, b, c, d, z)).norm() < 1e-12);
            let s = nrep_spectrum(a, b, c, d, z).unwrap();
            assert!(s.pair_sums.iter().all(|x| (x - 1.0).abs() < 1e-10));
            assert!((s.eigenvalues.iter().sum::<f64>() - 3.0).abs() < 1e-10);
        }
    }

    #[test]
    fn equal_coefficients() {
        let s = nrep_spectrum(0.5, 0.5, 0.5, 0.5, C64::new(0.0, 0.0)).unwrap();
        for x in s.eigenvalues {
            assert!((x - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(nrep_spectrum(1.0, 1.0, 0.0, 0.0, C64::new(0.0, 0.0)).is_err());
        assert!(nrep_spectrum(-0.6, 0.8, 0.0, 0.0, C64::new(0.0, 0.0)).is_err());
    }
}
