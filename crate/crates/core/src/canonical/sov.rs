//! Numerical reduction of 3-fermion states to single occupancy, and the
//! constructive reduction to the minimal universal subspace for even `m`.

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use super::optimize::{hermitian_basis, minimize_with_restarts, times_i, RestartOptions, UnitaryProblem};
use crate::multilinear::{apply_unitary, derivation, is_decomposable, RANK_TOL};
use crate::polycert::SubspaceSpec;
use crate::states::{is_bsov_mask, mask_hits_pair_twice};
use crate::{Error, FermionState, Result, UnitaryMatrix, C64};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_RESTARTS: usize = 50;
pub const DEFAULT_MAX_ITER: usize = 2000;
/// Progress window of the optimizer; slow runs are abandoned for a new start.
pub const DEFAULT_WINDOW: usize = 60;
/// Tolerance on the target amplitudes of [`zero_qubit_triple`].
pub const QUBIT_TOL: f64 = 1e-10;
/// SOV tolerance used inside [`reduce_to_minimal`].
pub const MINIMAL_SOV_TOL: f64 = 1e-22;

#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub transform: UnitaryMatrix,
    pub reduced: FermionState,
    /// Squared norm of the coefficients outside the target set.
    pub residual: f64,
    /// Restart that produced `transform` (0 for the start point or a direct construction).
    pub restart: usize,
    pub restarts_run: usize,
    /// Objective value reached by each restart.
    pub restart_values: Vec<f64>,
    pub success: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SovOptions {
    /// Success threshold, relative to `‖ψ‖²`.
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub window: usize,
}

impl Default for SovOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, restarts: DEFAULT_RESTARTS, seed: 0, max_iter: DEFAULT_MAX_ITER, window: DEFAULT_WINDOW }
    }
}

/// `r(U) = ‖Π_{S⊥}(∧ⁿU ψ)‖²`, as the vector of non-SOV amplitudes.
pub struct SovProblem<'a> {
    psi: &'a FermionState,
    off: Vec<usize>,
}

impl<'a> SovProblem<'a> {
    pub fn new(psi: &'a FermionState) -> Self {
        let off = psi.basis_masks().iter().enumerate().filter(|(_, &s)| mask_hits_pair_twice(s)).map(|(i, _)| i).collect();
        Self { psi, off }
    }

    pub fn value(&self, u: &UnitaryMatrix) -> f64 {
        self.residual(u).iter().map(|z| z.norm_sqr()).sum()
    }

    fn pick(&self, phi: &FermionState) -> Vec<C64> {
        self.off.iter().map(|&i| phi.amps()[i]).collect()
    }
}

impl UnitaryProblem for SovProblem<'_> {
    fn dim(&self) -> usize {
        self.psi.m()
    }

    fn residual(&self, u: &UnitaryMatrix) -> Vec<C64> {
        self.pick(&apply_unitary(u, self.psi).expect("dimensions agree"))
    }

    fn jacobian(&self, u: &UnitaryMatrix, gens: &[DMatrix<C64>]) -> Option<Vec<Vec<C64>>> {
        let phi = apply_unitary(u, self.psi).ok()?;
        gens.iter().map(|h| derivation(&times_i(h), &phi).ok().map(|d| self.pick(&d))).collect()
    }
}

/// Unitary whose rows `targets[k]` are `vecs[k]†`, so that `U vecs[k] = e_{targets[k]}`.
/// The remaining rows complete an orthonormal basis from standard vectors.
fn unitary_sending(m: usize, vecs: &[Vec<C64>], targets: &[usize]) -> Result<UnitaryMatrix> {
    let mut rows: Vec<Option<DVector<C64>>> = vec![None; m];
    let mut span: Vec<DVector<C64>> = Vec::new();
    for (v, &t) in vecs.iter().zip(targets) {
        let v = DVector::from_column_slice(v);
        span.push(v.clone());
        rows[t] = Some(v);
    }
    let mut e = 0;
    for row in rows.iter_mut().filter(|r| r.is_none()) {
        loop {
            if e >= m {
                return Err(Error::Numerical("basis completion failed".into()));
            }
            let mut w = DVector::from_fn(m, |i, _| if i == e { C64::new(1.0, 0.0) } else { C64::zero() });
            e += 1;
            for _ in 0..2 {
                for b in &span {
                    let p = b.dotc(&w);
                    w -= b * p;
                }
            }
            let n = w.norm();
            if n > 1e-6 {
                let w = w / C64::new(n, 0.0);
                span.push(w.clone());
                *row = Some(w);
                break;
            }
        }
    }
    let cols: Vec<DVector<C64>> = rows.into_iter().map(|r| r.expect("filled")).collect();
    UnitaryMatrix::with_tolerance(DMatrix::from_columns(&cols).adjoint(), 1e-9)
}

/// Slater determinants go straight to `e_1 ∧ e_3 ∧ e_5 ∧ …`.
fn decomposable_transform(psi: &FermionState) -> Result<Option<UnitaryMatrix>> {
    let (m, n) = (psi.m(), psi.n());
    if 2 * n > m + 1 {
        return Ok(None);
    }
    let targets: Vec<usize> = (0..n).map(|k| 2 * k).collect();
    let support: Vec<usize> = psi.amps().iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, _)| i).collect();
    if support.len() == 1 {
        let c = crate::Combination::unrank(m, n, support[0])?;
        let src: Vec<usize> = c.indices().iter().map(|i| i - 1).collect();
        let mut perm = vec![usize::MAX; m];
        for (&s, &t) in src.iter().zip(&targets) {
            perm[s] = t;
        }
        let mut free = (0..m).filter(|t| !targets.contains(t));
        for p in perm.iter_mut().filter(|p| **p == usize::MAX) {
            *p = free.next().expect("enough targets");
        }
        return UnitaryMatrix::permutation(&perm).map(Some);
    }
    let d = is_decomposable(psi, RANK_TOL)?;
    if !d.decomposable {
        return Ok(None);
    }
    unitary_sending(m, &d.support, &targets).map(Some)
}

fn finish(psi: &FermionState, u: UnitaryMatrix, restart: usize, values: Vec<f64>, tol: f64) -> Result<ReductionResult> {
    let reduced = apply_unitary(&u, psi)?;
    let residual = reduced.amps().iter().zip(reduced.basis_masks()).filter(|(_, s)| mask_hits_pair_twice(*s)).map(|(a, _)| a.norm_sqr()).sum();
    let success = residual <= tol * psi.norm_sqr();
    let restart_values = if values.is_empty() { vec![residual] } else { values };
    Ok(ReductionResult { transform: u, reduced, residual, restart, restarts_run: restart_values.len(), restart_values, success })
}

/// Minimize the non-SOV weight of `∧ⁿUψ` over `U`, for any particle number.
/// Restart 0 starts at the identity, so SOV inputs are accepted unchanged.
pub fn sov_reduction(psi: &FermionState, opts: SovOptions) -> Result<ReductionResult> {
    if psi.is_zero() {
        return Err(Error::DegenerateInput("reduction of the zero state"));
    }
    let m = psi.m();
    let problem = SovProblem::new(psi);
    let target = opts.tol * psi.norm_sqr();
    if problem.value(&UnitaryMatrix::identity(m)) <= target {
        return finish(psi, UnitaryMatrix::identity(m), 0, Vec::new(), opts.tol);
    }
    if let Some(u) = decomposable_transform(psi)? {
        let r = finish(psi, u, 0, Vec::new(), opts.tol)?;
        if r.success {
            return Ok(r);
        }
    }
    let gens = hermitian_basis(m, None);
    let out = minimize_with_restarts(
        &problem,
        &gens,
        None,
        |rng| UnitaryMatrix::haar_random(m, rng),
        RestartOptions { restarts: opts.restarts, seed: opts.seed, target, max_iter: opts.max_iter, window: opts.window },
    );
    finish(psi, out.u, out.restart, out.values, opts.tol)
}

/// Reduction of a 3-fermion state to the single-occupancy subspace.
pub fn reduce_to_sov(psi: &FermionState, opts: SovOptions) -> Result<ReductionResult> {
    if psi.n() != 3 {
        return Err(Error::InvalidParameter(format!("reduce_to_sov needs n = 3, got n = {}", psi.n())));
    }
    if psi.m() < 5 {
        return Err(Error::InvalidParameter(format!("reduce_to_sov needs m >= 5, got m = {}", psi.m())));
    }
    sov_reduction(psi, opts)
}

/// Three local unitaries, one per qubit, and the largest target amplitude left.
#[derive(Clone, Debug)]
pub struct QubitTriple {
    pub unitaries: [DMatrix<C64>; 3],
    pub max_target: f64,
    /// Whether the closed-form construction was used (as opposed to the optimizer).
    pub constructive: bool,
}

/// `(U0 ⊗ U1 ⊗ U2) ψ` with qubit labels `4i + 2j + k`.
pub fn apply_qubits(us: &[DMatrix<C64>; 3], psi: &[C64; 8]) -> [C64; 8] {
    let mut out = [C64::zero(); 8];
    for (a, o) in out.iter_mut().enumerate() {
        let (i, j, k) = (a >> 2, (a >> 1) & 1, a & 1);
        for (b, &p) in psi.iter().enumerate() {
            let (x, y, z) = (b >> 2, (b >> 1) & 1, b & 1);
            *o += us[0][(i, x)] * us[1][(j, y)] * us[2][(k, z)] * p;
        }
    }
    out
}

fn max_at(psi: &[C64; 8], targets: &[usize; 3]) -> f64 {
    targets.iter().map(|&t| psi[t].norm()).fold(0.0, f64::max)
}

fn su2_rows(r0: [C64; 2], r1: [C64; 2]) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[r0[0], r0[1], r1[0], r1[1]])
}

/// Closed form for the targets `{000, 001, 011}`. Rotating the first qubit
/// makes the slice `T[0]` singular, `T[0] = x yᵀ`; then `x ↦ e1` on the
/// second qubit and `y ↦ e0` on the third leave only `T[0]_{10}`.
fn qubit_construction(psi: &[C64; 8]) -> [DMatrix<C64>; 3] {
    let a = |j: usize, k: usize| psi[2 * j + k];
    let b = |j: usize, k: usize| psi[4 + 2 * j + k];
    let det_a = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    let det_b = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
    let mixed = a(0, 0) * b(1, 1) + b(0, 0) * a(1, 1) - a(0, 1) * b(1, 0) - b(0, 1) * a(1, 0);
    let scale = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().max(f64::MIN_POSITIVE);
    let small = 1e-14 * scale;
    // det(α A + β B) = 0
    let (al, be) = if det_a.norm() <= small {
        (C64::new(1.0, 0.0), C64::zero())
    } else if det_b.norm() <= small {
        (C64::zero(), C64::new(1.0, 0.0))
    } else {
        // det_b t² + mixed t + det_a = 0
        let disc = (mixed * mixed - det_a * det_b * 4.0).sqrt();
        let q = if (mixed.conj() * disc).re >= 0.0 { -(mixed + disc) / 2.0 } else { -(mixed - disc) / 2.0 };
        let t = if q.norm() > 0.0 { det_a / q } else { C64::zero() };
        let n = (1.0 + t.norm_sqr()).sqrt();
        (C64::new(1.0 / n, 0.0), t / n)
    };
    let v = su2_rows([al, be], [-be.conj(), al.conj()]);
    let s = DMatrix::from_fn(2, 2, |j, k| al * a(j, k) + be * b(j, k));

    // rank-one factors from the largest entry
    let (mut r, mut c, mut big) = (0, 0, 0.0);
    for j in 0..2 {
        for k in 0..2 {
            if s[(j, k)].norm() > big {
                big = s[(j, k)].norm();
                (r, c) = (j, k);
            }
        }
    }
    let id = DMatrix::identity(2, 2);
    if big <= 1e-300 {
        return [v, id.clone(), id];
    }
    let x = [s[(0, c)], s[(1, c)]];
    let y = [s[(r, 0)] / s[(r, c)], s[(r, 1)] / s[(r, c)]];
    let nx = (x[0].norm_sqr() + x[1].norm_sqr()).sqrt();
    let ny = (y[0].norm_sqr() + y[1].norm_sqr()).sqrt();
    let w1 = su2_rows([x[1] / nx, -x[0] / nx], [x[0].conj() / nx, x[1].conj() / nx]);
    let w2 = su2_rows([y[0].conj() / ny, y[1].conj() / ny], [y[1] / ny, -y[0] / ny]);
    [v, w1, w2]
}

struct QubitProblem<'a> {
    psi: &'a [C64; 8],
    targets: [usize; 3],
}

fn split_blocks(u: &UnitaryMatrix) -> [DMatrix<C64>; 3] {
    let e = u.entries();
    [0, 2, 4].map(|o| e.view((o, o), (2, 2)).into_owned())
}

impl UnitaryProblem for QubitProblem<'_> {
    fn dim(&self) -> usize {
        6
    }

    fn residual(&self, u: &UnitaryMatrix) -> Vec<C64> {
        let out = apply_qubits(&split_blocks(u), self.psi);
        self.targets.iter().map(|&t| out[t]).collect()
    }
}

/// Find local unitaries `U0 ⊗ U1 ⊗ U2` zeroing the amplitudes at `targets`
/// (labels `4i + 2j + k`). The pattern `{000, 001, 011}` is solved in closed
/// form; other triples, or a closed form missing the tolerance, fall back to
/// the optimizer over three 2×2 blocks. Tolerance is relative to `‖ψ‖`.
pub fn zero_qubit_triple(psi: &[C64; 8], targets: [usize; 3], tol: f64, restarts: usize, seed: u64) -> Result<QubitTriple> {
    if targets.iter().any(|&t| t > 7) {
        return Err(Error::InvalidParameter(format!("qubit labels must be below 8, got {targets:?}")));
    }
    let id = DMatrix::<C64>::identity(2, 2);
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let cut = tol * norm;
    if max_at(psi, &targets) <= cut {
        return Ok(QubitTriple { unitaries: [id.clone(), id.clone(), id], max_target: max_at(psi, &targets), constructive: true });
    }
    let mut sorted = targets;
    sorted.sort_unstable();
    if sorted == [0, 1, 3] {
        let us = qubit_construction(psi);
        let got = max_at(&apply_qubits(&us, psi), &targets);
        if got <= cut {
            return Ok(QubitTriple { unitaries: us, max_target: got, constructive: true });
        }
    }
    let problem = QubitProblem { psi, targets };
    let gens = hermitian_basis(6, Some(&[(0, 2), (2, 4), (4, 6)]));
    let out = minimize_with_restarts(
        &problem,
        &gens,
        None,
        |rng| {
            let b: Vec<DMatrix<C64>> = (0..3).map(|_| UnitaryMatrix::haar_random(2, rng).into_entries()).collect();
            UnitaryMatrix::block_diagonal(&b).expect("unitary blocks")
        },
        RestartOptions { restarts, seed, target: cut * cut, max_iter: 400, window: DEFAULT_WINDOW },
    );
    let us = split_blocks(&out.u);
    let got = max_at(&apply_qubits(&us, psi), &targets);
    Ok(QubitTriple { unitaries: us, max_target: got, constructive: false })
}

/// Squared weight of `ψ` outside the span of `spec`'s retained triples.
pub fn weight_outside(psi: &FermionState, spec: &SubspaceSpec) -> f64 {
    psi.terms()
        .filter(|(c, _)| {
            let i = c.indices();
            spec.excluded().contains(&[i[0], i[1], i[2]])
        })
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

fn pair_rotation(m: usize, pair: usize, x: &DMatrix<C64>) -> Result<UnitaryMatrix> {
    let mut e = DMatrix::<C64>::identity(m, m);
    e.view_mut((2 * pair - 2, 2 * pair - 2), (2, 2)).copy_from(x);
    UnitaryMatrix::with_tolerance(e, 1e-9)
}

/// SOV reduction, then block rotations removing the extra excluded triples
/// of the minimal-even subspace: `(1,3,5), (1,3,6), (1,4,6)` on the first
/// three pairs, then `(1, 2i−3, 2i−1)` on pair `i = 4, …, K`.
pub fn reduce_to_minimal(psi: &FermionState, opts: SovOptions) -> Result<ReductionResult> {
    let m = psi.m();
    if psi.n() != 3 {
        return Err(Error::InvalidParameter(format!("reduce_to_minimal needs n = 3, got n = {}", psi.n())));
    }
    if m < 6 || m % 2 != 0 {
        return Err(Error::InvalidParameter(format!("reduce_to_minimal needs even m >= 6, got m = {m}")));
    }
    // amplitudes, not just their squares, must be negligible here
    let sov = reduce_to_sov(psi, SovOptions { tol: opts.tol.min(MINIMAL_SOV_TOL), ..opts })?;
    let spec = SubspaceSpec::minimal_even(m)?;
    let mut u = sov.transform.clone();
    let mut cur = sov.reduced.clone();
    let scale = psi.norm();
    // zeros so far, checked after every step
    let mut zeroed: Vec<[usize; 3]> = Vec::new();
    let check = |state: &FermionState, zeroed: &[[usize; 3]], bound: f64| -> Result<()> {
        for t in zeroed {
            if state.amp(t)?.norm() > bound {
                return Err(Error::Numerical(format!("triple {t:?} reappeared")));
            }
        }
        Ok(())
    };
    let bound = 1e-6 * scale;

    // qubit step on pairs 1..3: |ijk⟩ ↔ e_{i+1} ∧ e_{j+3} ∧ e_{k+5}
    let mut q = [C64::zero(); 8];
    for (l, z) in q.iter_mut().enumerate() {
        *z = cur.amp(&[(l >> 2) + 1, ((l >> 1) & 1) + 3, (l & 1) + 5])?;
    }
    let triple = zero_qubit_triple(&q, [0, 1, 3], QUBIT_TOL, 100, opts.seed)?;
    let mut blocks: Vec<DMatrix<C64>> = triple.unitaries.to_vec();
    if m > 6 {
        blocks.push(DMatrix::identity(m - 6, m - 6));
    }
    let d = UnitaryMatrix::block_diagonal(&blocks)?;
    cur = apply_unitary(&d, &cur)?;
    u = d.mul(&u);
    zeroed.extend([[1, 3, 5], [1, 3, 6], [1, 4, 6]]);
    check(&cur, &zeroed, bound)?;

    for i in 4..=m / 2 {
        let ca = cur.amp(&[1, 2 * i - 3, 2 * i - 1])?;
        let cb = cur.amp(&[1, 2 * i - 3, 2 * i])?;
        let n = (ca.norm_sqr() + cb.norm_sqr()).sqrt();
        if n > 1e-300 {
            let x = su2_rows([cb / n, -ca / n], [ca.conj() / n, cb.conj() / n]);
            let r = pair_rotation(m, i, &x)?;
            cur = apply_unitary(&r, &cur)?;
            u = r.mul(&u);
        }
        zeroed.push([1, 2 * i - 3, 2 * i - 1]);
        check(&cur, &zeroed, bound)?;
    }

    let reduced = apply_unitary(&u, psi)?;
    let residual = weight_outside(&reduced, &spec);
    let success = sov.success && residual <= 1e-8 * psi.norm_sqr();
    Ok(ReductionResult {
        transform: u,
        reduced,
        residual,
        restart: sov.restart,
        restarts_run: sov.restarts_run,
        restart_values: sov.restart_values,
        success,
    })
}

/// Number of basis elements of `ψ` with `|amp| > tol·‖ψ‖`.
pub fn support_size(psi: &FermionState, tol: f64) -> usize {
    let cut = tol * psi.norm();
    psi.amps().iter().filter(|a| a.norm() > cut).count()
}

/// Does every amplitude above `tol·‖ψ‖` sit on a BSOV?
pub fn supported_on_bsov(psi: &FermionState, tol: f64) -> bool {
    let cut = tol * psi.norm();
    psi.amps().iter().zip(psi.basis_masks()).all(|(a, s)| a.norm() <= cut || is_bsov_mask(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn slater_goes_to_odd_modes() {
        let psi = FermionState::basis(6, &[1, 2, 3]).unwrap();
        let r = reduce_to_sov(&psi, SovOptions::default()).unwrap();
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.reduced.amp(&[1, 3, 5]).unwrap().norm(), 1.0);
        let mut rng = seeded(3);
        let u = UnitaryMatrix::haar_random(7, &mut rng);
        let psi = apply_unitary(&u, &FermionState::basis(7, &[2, 3, 4]).unwrap()).unwrap();
        let r = reduce_to_sov(&psi, SovOptions::default()).unwrap();
        assert!(r.success && r.restart == 0, "{}", r.residual);
        assert!((r.reduced.amp(&[1, 3, 5]).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sov_input_is_kept() {
        let psi = FermionState::from_terms(6, 3, &[(&[1, 3, 5], c(0.6)), (&[2, 4, 6], c(0.8))]).unwrap();
        let r = reduce_to_sov(&psi, SovOptions::default()).unwrap();
        assert_eq!(r.transform.entries(), UnitaryMatrix::identity(6).entries());
        assert_eq!((r.residual, r.restart), (0.0, 0));
    }

    #[test]
    fn random_states_reduce() {
        let mut rng = seeded(40);
        for m in [5, 6, 7] {
            for _ in 0..3 {
                let psi = FermionState::random(m, 3, &mut rng).unwrap();
                let r = reduce_to_sov(&psi, SovOptions::default()).unwrap();
                assert!(r.success, "m = {m}: residual {}", r.residual);
                assert!(r.transform.deviation() < 1e-9);
                assert!(r.reduced.distance(&apply_unitary(&r.transform, &psi).unwrap()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn analytic_jacobian_matches_differences() {
        let mut rng = seeded(41);
        let psi = FermionState::random(6, 3, &mut rng).unwrap();
        let p = SovProblem::new(&psi);
        let u = UnitaryMatrix::haar_random(6, &mut rng);
        let gens = hermitian_basis(6, None);
        let an = p.jacobian(&u, &gens).unwrap();
        let h = 1e-6;
        for (k, g) in gens.iter().enumerate().step_by(5) {
            let step = |t: f64| {
                let e = UnitaryMatrix::exp_i(&crate::HermitianMatrix::new(g * C64::new(t, 0.0)).unwrap());
                p.residual(&e.mul(&u))
            };
            let (a, b) = (step(h), step(-h));
            for (i, z) in an[k].iter().enumerate() {
                assert!((z - (a[i] - b[i]) / (2.0 * h)).norm() < 1e-7);
            }
        }
    }

    #[test]
    fn objective_is_invariant_under_pair_blocks() {
        let mut rng = seeded(42);
        for m in [6, 7] {
            let psi = FermionState::random(m, 3, &mut rng).unwrap();
            let p = SovProblem::new(&psi);
            let u = UnitaryMatrix::haar_random(m, &mut rng);
            let mut blocks: Vec<DMatrix<C64>> = (0..m / 2).map(|_| UnitaryMatrix::haar_random(2, &mut rng).into_entries()).collect();
            if m % 2 == 1 {
                blocks.push(UnitaryMatrix::haar_random(1, &mut rng).into_entries());
            }
            let d = UnitaryMatrix::block_diagonal(&blocks).unwrap();
            assert!((p.value(&d.mul(&u)) - p.value(&u)).abs() < 1e-9);
        }
    }

    #[test]
    fn qubit_triple_closed_form() {
        let mut rng = seeded(43);
        for _ in 0..50 {
            let s = FermionState::random(8, 1, &mut rng).unwrap();
            let psi: [C64; 8] = s.amps().try_into().unwrap();
            let t = zero_qubit_triple(&psi, [0, 1, 3], QUBIT_TOL, 100, 0).unwrap();
            assert!(t.constructive && t.max_target <= 1e-10, "{}", t.max_target);
            for u in &t.unitaries {
                assert!((u * u.adjoint() - DMatrix::<C64>::identity(2, 2)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn qubit_triple_trivial_inputs() {
        let id = DMatrix::<C64>::identity(2, 2);
        let zero = [C64::zero(); 8];
        let t = zero_qubit_triple(&zero, [0, 1, 3], QUBIT_TOL, 10, 0).unwrap();
        assert!(t.unitaries.iter().all(|u| *u == id));
        let mut top = [C64::zero(); 8];
        top[7] = c(1.0);
        let t = zero_qubit_triple(&top, [0, 1, 3], QUBIT_TOL, 10, 0).unwrap();
        assert!(t.unitaries.iter().all(|u| *u == id));
        assert!(zero_qubit_triple(&top, [0, 1, 8], QUBIT_TOL, 10, 0).is_err());
    }

    #[test]
    fn qubit_triple_relabeled_pattern_uses_optimizer() {
        // {111, 110, 100} is {000, 001, 011} under flips of all three qubits
        let mut rng = seeded(44);
        let s = FermionState::random(8, 1, &mut rng).unwrap();
        let psi: [C64; 8] = s.amps().try_into().unwrap();
        let t = zero_qubit_triple(&psi, [7, 6, 4], QUBIT_TOL, 100, 1).unwrap();
        assert!(!t.constructive && t.max_target <= 1e-10, "{}", t.max_target);
    }

    #[test]
    fn minimal_reduction() {
        let mut rng = seeded(45);
        for m in [6, 8] {
            let spec = SubspaceSpec::minimal_even(m).unwrap();
            for _ in 0..2 {
                let psi = FermionState::random(m, 3, &mut rng).unwrap();
                let r = reduce_to_minimal(&psi, SovOptions::default()).unwrap();
                assert!(r.success, "m = {m}: residual {}", r.residual);
                assert!(support_size(&r.reduced, 1e-8) <= spec.dim());
            }
        }
    }

    #[test]
    fn minimal_keeps_retained_basis_state() {
        let psi = FermionState::basis(6, &[2, 4, 6]).unwrap();
        let r = reduce_to_minimal(&psi, SovOptions::default()).unwrap();
        assert!(r.reduced.distance(&psi).unwrap() < 1e-12);
        assert!(reduce_to_minimal(&FermionState::basis(7, &[1, 2, 3]).unwrap(), SovOptions::default()).is_err());
    }
}
