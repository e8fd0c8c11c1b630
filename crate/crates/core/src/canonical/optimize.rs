//! Levenberg–Marquardt on the unitary group.
//!
//! A problem supplies a complex residual `r(U)` and, optionally, its
//! derivatives along `U ↦ exp(iθH_k) U` for a set of Hermitian generators
//! `H_k`. Without them the Jacobian is taken by central differences. Steps
//! are retracted through the matrix exponential, so iterates stay unitary.

use nalgebra::{DMatrix, DVector};

use crate::multilinear::HermitianMatrix;
use crate::rng;
use crate::{UnitaryMatrix, C64};

/// Step for finite-difference Jacobians.
pub const FD_STEP: f64 = 1e-6;

pub trait UnitaryProblem: Sync {
    /// Size of the unitary.
    fn dim(&self) -> usize;

    fn residual(&self, u: &UnitaryMatrix) -> Vec<C64>;

    /// Columns `d r(exp(iθH_k)U)/dθ` at `θ = 0`, if available.
    fn jacobian(&self, _u: &UnitaryMatrix, _gens: &[DMatrix<C64>]) -> Option<Vec<Vec<C64>>> {
        None
    }
}

/// The basis `E_aa`, `E_ab + E_ba`, `i(E_ab − E_ba)` of Hermitian `m × m`
/// matrices, restricted to blocks of consecutive indices when `blocks` is
/// given.
pub fn hermitian_basis(m: usize, blocks: Option<&[(usize, usize)]>) -> Vec<DMatrix<C64>> {
    let ranges: Vec<(usize, usize)> = match blocks {
        Some(b) => b.to_vec(),
        None => vec![(0, m)],
    };
    let mut out = Vec::new();
    for (lo, hi) in ranges {
        for a in lo..hi {
            let mut h = DMatrix::zeros(m, m);
            h[(a, a)] = C64::new(1.0, 0.0);
            out.push(h);
            for b in a + 1..hi {
                let mut h = DMatrix::zeros(m, m);
                h[(a, b)] = C64::new(1.0, 0.0);
                h[(b, a)] = C64::new(1.0, 0.0);
                out.push(h);
                let mut h = DMatrix::zeros(m, m);
                h[(a, b)] = C64::new(0.0, 1.0);
                h[(b, a)] = C64::new(0.0, -1.0);
                out.push(h);
            }
        }
    }
    out
}

fn sqnorm(r: &[C64]) -> f64 {
    r.iter().map(|z| z.norm_sqr()).sum()
}

fn step_unitary(gens: &[DMatrix<C64>], theta: &[f64], u: &UnitaryMatrix) -> UnitaryMatrix {
    let m = u.dim();
    let mut h = DMatrix::<C64>::zeros(m, m);
    for (g, &t) in gens.iter().zip(theta) {
        if t != 0.0 {
            h += g * C64::new(t, 0.0);
        }
    }
    let e = UnitaryMatrix::exp_i(&HermitianMatrix::from_nearly_hermitian(h));
    let mut next = e.mul(u);
    next.reunitarize();
    next
}

fn fd_jacobian<P: UnitaryProblem + ?Sized>(p: &P, u: &UnitaryMatrix, gens: &[DMatrix<C64>]) -> Vec<Vec<C64>> {
    let mut theta = vec![0.0; gens.len()];
    (0..gens.len())
        .map(|k| {
            theta[k] = FD_STEP;
            let plus = p.residual(&step_unitary(gens, &theta, u));
            theta[k] = -FD_STEP;
            let minus = p.residual(&step_unitary(gens, &theta, u));
            theta[k] = 0.0;
            plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * FD_STEP)).collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Stop once `‖r‖² ≤ target`.
    pub target: f64,
    /// Give up when `‖r‖²` shrinks by less than [`PROGRESS_FACTOR`] over
    /// this many iterations (0 disables the check).
    pub window: usize,
}

pub const PROGRESS_FACTOR: f64 = 10.0;

#[derive(Clone, Debug)]
pub struct LmOutcome {
    pub u: UnitaryMatrix,
    pub value: f64,
    pub iterations: usize,
}

/// Minimize `‖r(U)‖²` from `u0`.
pub fn levenberg_marquardt<P: UnitaryProblem + ?Sized>(
    p: &P,
    gens: &[DMatrix<C64>],
    u0: UnitaryMatrix,
    opts: LmOptions,
) -> LmOutcome {
    let np = gens.len();
    let mut u = u0;
    let mut r = p.residual(&u);
    let mut f = sqnorm(&r);
    // isotropic damping λ·max diag(JᵀJ), updated by Nielsen's rule
    let mut lambda = 1e-3;
    let mut nu = 2.0;
    let mut it = 0;
    let mut history = vec![f];
    while it < opts.max_iter && f > opts.target {
        it += 1;
        let cols = p.jacobian(&u, gens).unwrap_or_else(|| fd_jacobian(p, &u, gens));
        let nr = r.len();
        // real form: rows (Re, Im)
        let j = DMatrix::<f64>::from_fn(2 * nr, np, |i, k| if i < nr { cols[k][i].re } else { cols[k][i - nr].im });
        let rv = DVector::<f64>::from_fn(2 * nr, |i, _| if i < nr { r[i].re } else { r[i - nr].im });
        let jtj = j.transpose() * &j;
        let g = j.transpose() * &rv;
        let diag_max = (0..np).map(|k| jtj[(k, k)]).fold(0.0f64, f64::max).max(1e-300);
        let mut accepted = false;
        for _ in 0..40 {
            let mut a = jtj.clone();
            for k in 0..np {
                a[(k, k)] += lambda * diag_max;
            }
            let Some(ch) = a.cholesky() else {
                lambda *= nu;
                nu *= 2.0;
                continue;
            };
            let delta = ch.solve(&(-&g));
            let cand = step_unitary(gens, delta.as_slice(), &u);
            let rc = p.residual(&cand);
            let fc = sqnorm(&rc);
            if fc < f {
                let predicted = f - (&rv + &j * &delta).norm_squared();
                let rho = (f - fc) / predicted.max(f64::MIN_POSITIVE);
                u = cand;
                r = rc;
                f = fc;
                lambda *= (1.0f64 / 3.0).max(1.0 - (2.0 * rho - 1.0).powi(3));
                lambda = lambda.max(1e-15);
                nu = 2.0;
                accepted = true;
                break;
            }
            lambda *= nu;
            nu *= 2.0;
        }
        if !accepted || lambda > 1e12 {
            break;
        }
        history.push(f);
        if opts.window > 0 && it >= opts.window && f * PROGRESS_FACTOR > history[it - opts.window] {
            break;
        }
    }
    LmOutcome { u, value: f, iterations: it }
}

#[derive(Clone, Copy, Debug)]
pub struct RestartOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Success threshold on `‖r‖²`.
    pub target: f64,
    pub max_iter: usize,
    pub window: usize,
}

#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub u: UnitaryMatrix,
    pub value: f64,
    /// Restart that produced `u`.
    pub restart: usize,
    pub restarts_run: usize,
    /// Final value of every restart that ran, in order.
    pub values: Vec<f64>,
}

/// Restart 0 starts from `start` (the identity if `None`); restart `k > 0`
/// from a Haar-random unitary drawn from stream `k` of `seed`. Stops at
/// the first success; otherwise returns the lowest value, earliest restart
/// on ties.
pub fn minimize_with_restarts<P: UnitaryProblem + ?Sized>(
    p: &P,
    gens: &[DMatrix<C64>],
    start: Option<UnitaryMatrix>,
    random_start: impl Fn(&mut rng::StreamRng) -> UnitaryMatrix,
    opts: RestartOptions,
) -> RestartOutcome {
    let m = p.dim();
    let mut best: Option<RestartOutcome> = None;
    let mut values = Vec::new();
    let lm = LmOptions { max_iter: opts.max_iter, target: opts.target, window: opts.window };
    for k in 0..opts.restarts.max(1) {
        let u0 = if k == 0 {
            start.clone().unwrap_or_else(|| UnitaryMatrix::identity(m))
        } else {
            random_start(&mut rng::stream(opts.seed, k as u64))
        };
        let out = levenberg_marquardt(p, gens, u0, lm);
        values.push(out.value);
        let better = best.as_ref().is_none_or(|b| out.value < b.value);
        if better {
            best = Some(RestartOutcome { u: out.u, value: out.value, restart: k, restarts_run: k + 1, values: Vec::new() });
        }
        if let Some(b) = best.as_mut() {
            b.restarts_run = k + 1;
            if b.value <= opts.target {
                break;
            }
        }
    }
    let mut best = best.expect("at least one restart");
    best.values = values;
    best
}

/// `iH`, the derivative of `exp(iθH)` at `θ = 0`.
pub(crate) fn times_i(h: &DMatrix<C64>) -> DMatrix<C64> {
    h * C64::new(0.0, 1.0)
}
