//! Numerical evidence that BCS and generic states with four or more
//! fermions escape the single-occupancy subspace.

use nalgebra::DMatrix;

use super::bcs::bcs_state;
use crate::canonical::optimize::{hermitian_basis, minimize_with_restarts, RestartOptions, UnitaryProblem};
use crate::canonical::{sov_reduction, SovOptions, DEFAULT_TOL};
use crate::{Error, FermionState, Result, UnitaryMatrix, C64};

/// Iteration cap and progress window for the obstruction searches.
pub const OBSTRUCTION_MAX_ITER: usize = 1000;
pub const OBSTRUCTION_WINDOW: usize = 100;

/// `‖⟨a∧b|ψ⟩‖²` with `(a, b)` the first two columns of `U`.
struct PairContraction<'a> {
    psi: &'a FermionState,
}

impl PairContraction<'_> {
    fn two_vector(u: &UnitaryMatrix) -> FermionState {
        let m = u.dim();
        FermionState::wedge_of_vectors(m, &[u.column(0), u.column(1)]).expect("two columns")
    }
}

impl UnitaryProblem for PairContraction<'_> {
    fn dim(&self) -> usize {
        self.psi.m()
    }

    fn residual(&self, u: &UnitaryMatrix) -> Vec<C64> {
        Self::two_vector(u).partial_inner(self.psi).expect("same m").into_amps()
    }
}

#[derive(Clone, Debug)]
pub struct ObstructionResult {
    /// Smallest `‖⟨a∧b|ψ_{N,M}⟩‖²` found.
    pub min_value: f64,
    /// The same, divided by `‖ψ_{N,M}‖²`.
    pub min_normalized: f64,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub restart_values: Vec<f64>,
}

/// Minimize `‖⟨a∧b|ψ⟩‖²` over orthonormal pairs, for any state with `n ≥ 2`.
pub fn pair_obstruction(psi: &FermionState, restarts: usize, seed: u64) -> Result<ObstructionResult> {
    if psi.n() < 2 || psi.m() < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got n = {}", psi.n())));
    }
    let m = psi.m();
    let problem = PairContraction { psi };
    let gens: Vec<DMatrix<C64>> = hermitian_basis(m, None);
    let out = minimize_with_restarts(
        &problem,
        &gens,
        None,
        |rng| UnitaryMatrix::haar_random(m, rng),
        RestartOptions {
            restarts,
            seed,
            target: 0.0,
            max_iter: OBSTRUCTION_MAX_ITER,
            window: OBSTRUCTION_WINDOW,
        },
    );
    Ok(ObstructionResult {
        min_value: out.value,
        min_normalized: out.value / psi.norm_sqr(),
        a: out.u.column(0),
        b: out.u.column(1),
        restart_values: out.values,
    })
}

/// [`pair_obstruction`] for the BCS state `ψ_{N,M}`, `M ≥ 2N`.
pub fn bcs_obstruction(n: usize, m: usize, restarts: usize, seed: u64) -> Result<ObstructionResult> {
    if m < 2 * n {
        return Err(Error::InvalidParameter(format!("need M >= 2N, got N = {n}, M = {m}")));
    }
    pair_obstruction(&bcs_state(n, m)?, restarts, seed)
}

#[derive(Clone, Debug)]
pub struct EscapeResult {
    /// Best `‖Π_{S⊥}(∧⁴U ψ)‖² / ‖ψ‖²`.
    pub best_residual: f64,
    pub restart_values: Vec<f64>,
    pub transform: UnitaryMatrix,
}

/// Try to rotate a 4-fermion state into the single-occupancy subspace.
pub fn sov_escape_experiment(psi: &FermionState, restarts: usize, seed: u64) -> Result<EscapeResult> {
    if psi.n() != 4 {
        return Err(Error::InvalidParameter(format!("escape experiment needs n = 4, got n = {}", psi.n())));
    }
    if psi.m() < 8 {
        return Err(Error::InvalidParameter(format!("escape experiment needs m >= 8, got m = {}", psi.m())));
    }
    let r = sov_reduction(
        psi,
        SovOptions { tol: DEFAULT_TOL, restarts, seed, max_iter: OBSTRUCTION_MAX_ITER, window: OBSTRUCTION_WINDOW },
    )?;
    let w = psi.norm_sqr();
    Ok(EscapeResult {
        best_residual: r.residual / w,
        restart_values: r.restart_values.iter().map(|v| v / w).collect(),
        transform: r.transform,
    })
}
