//! The `∧^n U` action of the single-particle unitary group and its
//! infinitesimal version.

use nalgebra::DMatrix;
use num_traits::Zero;
use rayon::prelude::*;

use super::combination::{mask_indices, rank_mask};
use super::{FermionState, UnitaryMatrix};
use crate::{Error, Result, C64};

const PAR_THRESHOLD: usize = 256;

/// Determinant of a small dense row-major `n × n` matrix.
pub(crate) fn det(a: &mut [C64], n: usize) -> C64 {
    match n {
        0 => C64::new(1.0, 0.0),
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        4 => {
            let s0 = a[0] * a[5] - a[1] * a[4];
            let s1 = a[0] * a[6] - a[2] * a[4];
            let s2 = a[0] * a[7] - a[3] * a[4];
            let s3 = a[1] * a[6] - a[2] * a[5];
            let s4 = a[1] * a[7] - a[3] * a[5];
            let s5 = a[2] * a[7] - a[3] * a[6];
            let c5 = a[10] * a[15] - a[11] * a[14];
            let c4 = a[9] * a[15] - a[11] * a[13];
            let c3 = a[9] * a[14] - a[10] * a[13];
            let c2 = a[8] * a[15] - a[11] * a[12];
            let c1 = a[8] * a[14] - a[10] * a[12];
            let c0 = a[8] * a[13] - a[9] * a[12];
            s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
        }
        _ => lu_det(a, n),
    }
}

fn lu_det(a: &mut [C64], n: usize) -> C64 {
    let mut d = C64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm();
        for r in col + 1..n {
            let v = a[r * n + col].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return C64::zero();
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            d = -d;
        }
        let p = a[col * n + col];
        d *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[r * n + k] -= f * v;
            }
        }
    }
    d
}

/// `∧^n U |ψ⟩`: the amplitude at `R` is `Σ_S det(U[R, S]) ψ_S`.
pub fn apply_unitary(u: &UnitaryMatrix, psi: &FermionState) -> Result<FermionState> {
    apply_matrix(u.entries(), psi)
}

/// Same as [`apply_unitary`] for an arbitrary square matrix.
pub fn apply_matrix(u: &DMatrix<C64>, psi: &FermionState) -> Result<FermionState> {
    let m = psi.m();
    let n = psi.n();
    if u.nrows() != m || u.ncols() != m {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix acting on m = {m}",
            u.nrows(),
            u.ncols()
        )));
    }
    let masks = psi.basis_masks();
    let support: Vec<(Vec<usize>, C64)> = psi
        .amps()
        .iter()
        .zip(&masks)
        .filter(|(a, _)| !a.is_zero())
        .map(|(a, &s)| (mask_indices(s).map(|i| i - 1).collect(), *a))
        .collect();
    let amp_at = |r: u64| -> C64 {
        let rows: Vec<usize> = mask_indices(r).map(|i| i - 1).collect();
        let mut buf = vec![C64::zero(); n * n];
        let mut acc = C64::zero();
        for (cols, a) in &support {
            for (i, &ri) in rows.iter().enumerate() {
                for (j, &cj) in cols.iter().enumerate() {
                    buf[i * n + j] = u[(ri, cj)];
                }
            }
            acc += det(&mut buf, n) * a;
        }
        acc
    };
    let amps: Vec<C64> = if masks.len() * support.len() >= PAR_THRESHOLD * 16 {
        masks.par_iter().map(|&r| amp_at(r)).collect()
    } else {
        masks.iter().map(|&r| amp_at(r)).collect()
    };
    FermionState::from_amps(m, n, amps)
}

/// Derivation `D_X ψ = d/dt ∧^n exp(tX) ψ |_{t=0}` for any `m × m` matrix.
/// On a basis element it replaces each occupied index `b` by every `a` in
/// turn, weighted by `X[a, b]`.
pub fn derivation(x: &DMatrix<C64>, psi: &FermionState) -> Result<FermionState> {
    let m = psi.m();
    if x.nrows() != m || x.ncols() != m {
        return Err(Error::DimensionMismatch(format!("{}x{} generator on m = {m}", x.nrows(), x.ncols())));
    }
    let mut out = FermionState::zeros(m, psi.n())?;
    let masks = psi.basis_masks();
    for (amp, &t) in psi.amps().iter().zip(&masks) {
        if amp.is_zero() {
            continue;
        }
        for b in mask_indices(t).map(|i| i - 1) {
            let rest = t & !(1u64 << b);
            for a in 0..m {
                let xab = x[(a, b)];
                if xab.is_zero() {
                    continue;
                }
                if a == b {
                    out.amps_mut()[rank_mask(m, t)] += xab * amp;
                    continue;
                }
                if rest & (1u64 << a) != 0 {
                    continue;
                }
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let between = (rest >> (lo + 1)) & ((1u64 << (hi - lo - 1)) - 1);
                let sign = if between.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                out.amps_mut()[rank_mask(m, rest | (1u64 << a))] += xab * amp * sign;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn naive_det(a: &[C64], n: usize) -> C64 {
        if n == 0 {
            return C64::new(1.0, 0.0);
        }
        (0..n)
            .map(|j| {
                let minor: Vec<C64> = (1..n)
                    .flat_map(|i| (0..n).filter(move |&k| k != j).map(move |k| (i, k)))
                    .map(|(i, k)| a[i * n + k])
                    .collect();
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                a[j] * naive_det(&minor, n - 1) * s
            })
            .sum()
    }

    #[test]
    fn determinants_agree_with_cofactor_expansion() {
        let mut rng = seeded(7);
        for n in 0..7 {
            let u = UnitaryMatrix::haar_random(n.max(1), &mut rng);
            let a: Vec<C64> = (0..n * n).map(|k| u.entries()[(k / n, k % n)] * C64::new(1.3, -0.2)).collect();
            let mut b = a.clone();
            let d1 = det(&mut b, n);
            let d2 = naive_det(&a, n);
            assert!((d1 - d2).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn identity_is_trivial() {
        let mut rng = seeded(3);
        let psi = FermionState::random(6, 3, &mut rng).unwrap();
        let out = apply_unitary(&UnitaryMatrix::identity(6), &psi).unwrap();
        assert!(out.distance(&psi).unwrap() < 1e-15);
    }

    #[test]
    fn permutation_relabels_with_sign() {
        // σ: 1→3, 2→1, 3→2 sends e1∧e2 to e3∧e1 = −e1∧e3
        let u = UnitaryMatrix::permutation(&[2, 0, 1]).unwrap();
        let psi = FermionState::basis(3, &[1, 2]).unwrap();
        let out = apply_unitary(&u, &psi).unwrap();
        assert_eq!(out, FermionState::basis(3, &[1, 3]).unwrap().scale(C64::new(-1.0, 0.0)));
    }

    #[test]
    fn derivation_matches_finite_difference() {
        let mut rng = seeded(11);
        let psi = FermionState::random(6, 3, &mut rng).unwrap();
        let g = UnitaryMatrix::haar_random(6, &mut rng).into_entries();
        let h = 1e-6;
        let plus = apply_matrix(&(DMatrix::identity(6, 6) + &g * C64::new(h, 0.0)), &psi).unwrap();
        let minus = apply_matrix(&(DMatrix::identity(6, 6) - &g * C64::new(h, 0.0)), &psi).unwrap();
        let fd = (&plus - &minus).scale(C64::new(0.5 / h, 0.0));
        let d = derivation(&g, &psi).unwrap();
        assert!(fd.distance(&d).unwrap() < 1e-8);
    }

    #[test]
    fn dimension_mismatch() {
        let psi = FermionState::basis(4, &[1, 2]).unwrap();
        assert!(apply_unitary(&UnitaryMatrix::identity(5), &psi).is_err());
    }
}
