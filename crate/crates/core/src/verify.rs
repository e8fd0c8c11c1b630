//! The acceptance checks, one runner per criterion. Each returns a
//! [`CriterionReport`]; none of them panics on a failed check.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{
    canonical_3in5, nrep_spectrum, reduce_to_minimal, reduce_to_sov, support_size, takagi_2vector, SovOptions,
};
use crate::multilinear::{apply_unitary, combination_masks, Combination};
use crate::polycert::{
    certify, closed_form_even, closed_form_odd, coeff_table, default_multiplier, dims_report, pairing_direct, CertifyOptions,
    LinearForm, MultiPoly, Multiplier, PairingOptions, SubspaceSpec, Verdict,
};
use crate::rng::{seeded, stream};
use crate::states::{
    bcs_obstruction, bcs_state, extend_modes, is_sov, mask_hits_pair_twice, pair_block_unitary, sov_escape_experiment,
};
use crate::{FermionState, Result, UnitaryMatrix, C64};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub details: Vec<String>,
    pub elapsed_secs: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!("{} criterion {:>2}: {} ({:.1} s)", if self.passed { "PASS" } else { "FAIL" }, self.id, self.title, self.elapsed_secs)
    }
}

/// Collects checks; an `Err` from the body counts as a failure.
struct Run {
    ok: bool,
    details: Vec<String>,
}

impl Run {
    fn check(&mut self, cond: bool, msg: impl Into<String>) {
        let msg = msg.into();
        self.details.push(format!("[{}] {msg}", if cond { "ok" } else { "FAILED" }));
        self.ok &= cond;
    }
}

fn run(id: u32, title: &str, body: impl FnOnce(&mut Run) -> Result<()>) -> CriterionReport {
    let start = Instant::now();
    let mut r = Run { ok: true, details: Vec::new() };
    if let Err(e) = body(&mut r) {
        r.check(false, format!("error: {e}"));
    }
    CriterionReport { id, title: title.into(), passed: r.ok, details: r.details, elapsed_secs: start.elapsed().as_secs_f64() }
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// 1. Certificates for the minimal-odd presets at M = 7, 9, 11.
pub fn criterion_1() -> CriterionReport {
    run(1, "certificate values 48, 10368, 12431232", |r| {
        for (m, want, limit, elim) in [(7usize, 48u64, 5.0, false), (9, 10368, 120.0, false), (11, 12431232, 1800.0, true)] {
            let spec = SubspaceSpec::minimal_odd(m)?;
            let c = certify(&spec, CertifyOptions { eliminate_last_var: Some(elim), ..Default::default() })?;
            let mag = if c.pairing < BigInt::zero() { -c.pairing.clone() } else { c.pairing.clone() };
            r.check(
                mag == BigInt::from(want) && c.verdict == Verdict::Universal && c.elapsed_secs < limit,
                format!("M = {m}: pairing {} verdict {:?} in {:.2} s (limit {limit} s)", c.pairing, c.verdict, c.elapsed_secs),
            );
        }
        Ok(())
    })
}

/// The printed coefficient table, rows `M = 4 … 8`.
pub const PRINTED_TABLE: [(usize, &[i64]); 5] = [
    (4, &[1, 1, 1, 0]),
    (5, &[0, 1, 1, 0]),
    (6, &[1, 2, 3, 2, 1, 0]),
    (7, &[0, 2, 4, 4, 2, 0]),
    (8, &[1, 3, 7, 9, 7, 3, 1]),
];

/// `a_k^{(M)}` by expanding the two-variable identity with machine integers.
fn expansion_oracle(m: usize) -> Vec<i128> {
    let d = m - 2;
    // coefficient of x^{d−k} y^k, stored by k
    let mut total = vec![0i128; d + 1];
    for j in 0..=d {
        // (x+y)^{d−j}: binomials
        let e = d - j;
        let mut binom = vec![1i128; e + 1];
        for i in 1..=e {
            binom[i] = binom[i - 1] * (e + 1 - i) as i128 / i as i128;
        }
        let sign = if j % 2 == 0 { 1 } else { -1 };
        for (a, b) in binom.iter().enumerate() {
            for k in 0..=j {
                total[a + k] += sign * b;
            }
        }
    }
    total
}

/// 2. Coefficient table against the printed rows; palindromes and conventions.
pub fn criterion_2() -> CriterionReport {
    run(2, "coefficient table", |r| {
        for (m, row) in PRINTED_TABLE {
            let t = coeff_table(m)?;
            let got: Vec<BigInt> = (0..row.len()).map(|p| t.get(p)).collect();
            let want: Vec<BigInt> = row.iter().map(|&v| BigInt::from(v)).collect();
            r.check(got == want, format!("M = {m}: {:?}", got.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
        }
        let mut ok = true;
        for m in 4..=20 {
            let t = coeff_table(m)?;
            let oracle = expansion_oracle(m);
            let edge = if m % 2 == 0 { 1 } else { 0 };
            ok &= (0..=m - 2).all(|p| t.get(p) == BigInt::from(oracle[p]));
            ok &= (0..=m - 2).all(|p| t.get(p) == t.get(m - 2 - p));
            ok &= t.get(0) == BigInt::from(edge) && t.get(m - 2) == BigInt::from(edge) && t.get(m - 1).is_zero();
        }
        r.check(ok, "M = 4..20: expansion oracle, palindrome a_p = a_{M-2-p}, edges and a_{M-1} = 0");
        Ok(())
    })
}

/// 3. Closed forms against the dynamic-programming pairing.
pub fn criterion_3() -> CriterionReport {
    run(3, "closed forms equal DP pairings", |r| {
        for m in [6usize, 8, 7] {
            let spec = SubspaceSpec::sov(m)?;
            let mu = Multiplier::Monomial(default_multiplier(m));
            let dp = pairing_direct(&spec, &mu, PairingOptions::default())?.value;
            let cf = if m % 2 == 0 { closed_form_even(m)? } else { closed_form_odd(m)? };
            r.check(dp == cf, format!("M = {m}: DP {dp}, closed form {cf}"));
        }
        // full expansion at M = 6
        let spec = SubspaceSpec::sov(6)?;
        let mut p = MultiPoly::monomial(default_multiplier(6), BigInt::from(1));
        for t in spec.excluded() {
            p = &p * &MultiPoly::linear(6, &LinearForm(t.to_vec()))?;
        }
        let naive = p.vandermonde_pairing();
        r.check(naive == BigInt::from(-6), format!("M = 6 SOV by full expansion: {naive}"));
        Ok(())
    })
}

/// 4. Mirrored coefficients differ, so every closed form is nonzero.
pub fn criterion_4() -> CriterionReport {
    run(4, "mirrored coefficients differ for M <= 41", |r| {
        let mut ok = true;
        let mut bad = Vec::new();
        for m in (6..=40).step_by(2) {
            let t = coeff_table(m)?;
            let differs = (0..m / 2).all(|p| t.get(p) != t.get(m - 1 - p));
            let nonzero = !closed_form_even(m)?.is_zero();
            if !(differs && nonzero) {
                bad.push(m);
            }
            ok &= differs && nonzero;
        }
        for m in (7..=41).step_by(2) {
            let t = coeff_table(m)?;
            let differs = (1..=m / 2).all(|p| t.get(p) != t.get(m - p));
            let nonzero = !closed_form_odd(m)?.is_zero();
            if !(differs && nonzero) {
                bad.push(m);
            }
            ok &= differs && nonzero;
        }
        r.check(ok, format!("even M in 6..=40 and odd M in 7..=41; failures: {bad:?}"));
        Ok(())
    })
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// 5. Rotate-and-recover for the Takagi form and the dimension-five form.
pub fn criterion_5() -> CriterionReport {
    run(5, "canonical forms recovered after random rotations", |r| {
        let mut worst = 0.0f64;
        let mut ok = true;
        for t in 0..200u64 {
            let mut rng = stream(500, t);
            let m = 4 + (t as usize % 7);
            let k = 1 + rng.random_range(0..m / 2);
            let coeffs = sorted_desc((0..k).map(|_| rng.random_range(0.1..2.0)).collect());
            let mut base = FermionState::zeros(m, 2)?;
            for (i, c) in coeffs.iter().enumerate() {
                base.set_amp(&[2 * i + 1, 2 * i + 2], C64::new(*c, 0.0))?;
            }
            let u = UnitaryMatrix::haar_random(m, &mut rng);
            let f = takagi_2vector(&apply_unitary(&u, &base)?)?;
            if f.coeffs.len() != k {
                ok = false;
                continue;
            }
            worst = f.coeffs.iter().zip(&coeffs).fold(worst, |w, (a, b)| w.max((a - b).abs()));
        }
        r.check(ok && worst <= 1e-8, format!("Takagi, 200 trials with m = 4..10: worst coefficient error {worst:.2e}"));

        let bcs = takagi_2vector(&bcs_state(2, 10)?)?;
        r.check(
            bcs.coeffs.len() == 5 && bcs.coeffs.iter().all(|c| (c - 1.0).abs() <= 1e-12),
            format!("pair state psi_(2,10): coefficients {:?}", bcs.coeffs),
        );

        let mut worst = 0.0f64;
        for t in 0..200u64 {
            let mut rng = stream(501, t);
            let (a, b) = (rng.random_range(0.0..1.0f64), rng.random_range(0.0..1.0f64));
            let (c1, c2) = (a.max(b), a.min(b));
            let base = FermionState::from_terms(5, 3, &[(&[1, 2, 5], C64::new(c1, 0.0)), (&[3, 4, 5], C64::new(c2, 0.0))])?;
            let u = UnitaryMatrix::haar_random(5, &mut rng);
            let f = canonical_3in5(&apply_unitary(&u, &base)?)?;
            worst = worst.max((f.c1 - c1).abs()).max((f.c2 - c2).abs());
        }
        r.check(worst <= 1e-8, format!("dimension five, 200 trials: worst coefficient error {worst:.2e}"));
        Ok(())
    })
}

/// 6. Numerical reductions to single occupancy and to the minimal subspace.
pub fn criterion_6() -> CriterionReport {
    run(6, "reduce_to_sov on random states, m = 6..10", |r| {
        for m in 6..=10usize {
            let outcomes: Vec<Result<(bool, usize, f64)>> = (0..100u64)
                .into_par_iter()
                .map(|i| {
                    let psi = FermionState::random(m, 3, &mut stream(600 + m as u64, i))?;
                    let red = reduce_to_sov(&psi, SovOptions { seed: i, ..Default::default() })?;
                    let rel = red.residual / psi.norm_sqr();
                    let sov = is_sov(&red.reduced, 1e-6)?.is_sov;
                    Ok((red.success && rel <= 1e-12 && red.restarts_run <= 50 && sov, red.restarts_run, rel))
                })
                .collect();
            let outcomes: Vec<(bool, usize, f64)> = outcomes.into_iter().collect::<Result<_>>()?;
            let passed = outcomes.iter().filter(|o| o.0).count();
            let max_runs = outcomes.iter().map(|o| o.1).max().unwrap_or(0);
            let worst = outcomes.iter().map(|o| o.2).fold(0.0, f64::max);
            r.check(passed == 100, format!("m = {m}: {passed}/100 reduced, most restarts {max_runs}, worst relative residual {worst:.1e}"));
        }
        for m in [6usize, 8] {
            let bound = m * (m - 1) * (m - 5) / 6;
            let mut worst = 0;
            let mut ok = true;
            for i in 0..20u64 {
                let psi = FermionState::random(m, 3, &mut stream(650 + m as u64, i))?;
                let red = reduce_to_minimal(&psi, SovOptions { seed: i, ..Default::default() })?;
                let s = support_size(&red.reduced, 1e-8);
                worst = worst.max(s);
                ok &= red.success && s <= bound;
            }
            r.check(ok, format!("reduce_to_minimal m = {m}: at most {worst} nonzero amplitudes (bound {bound}) over 20 states"));
        }
        Ok(())
    })
}

/// 7. One-particle eigenvalues of the five-term normal form pair up.
pub fn criterion_7() -> CriterionReport {
    run(7, "eigenvalue pairing for 1000 normal-form tuples", |r| {
        let mut rng = seeded(700);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let g: Vec<f64> = (0..6).map(|_| gaussian(&mut rng)).collect();
            let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            let s = nrep_spectrum(g[0].abs() / n, g[1].abs() / n, g[2].abs() / n, g[3].abs() / n, C64::new(g[4] / n, g[5] / n))?;
            worst = s.pair_sums.iter().fold(worst, |w, x| w.max((x - 1.0).abs()));
        }
        r.check(worst <= 1e-10, format!("worst |lambda_i + lambda_(7-i) - 1| = {worst:.1e}"));
        Ok(())
    })
}

/// A random single-occupancy 4-vector rotated by a random unitary.
fn planted_state(m: usize, seed: u64) -> Result<FermionState> {
    let mut rng = seeded(seed);
    let mut psi = FermionState::random(m, 4, &mut rng)?;
    let masks = psi.basis_masks();
    for (a, s) in psi.amps_mut().iter_mut().zip(masks) {
        if mask_hits_pair_twice(s) {
            *a = C64::new(0.0, 0.0);
        }
    }
    psi.normalize()?;
    apply_unitary(&UnitaryMatrix::haar_random(m, &mut rng), &psi)
}

/// Default threshold for the escape experiments.
pub const ESCAPE_THRESHOLD: f64 = 0.01;

/// 8. BCS obstruction, escape experiments, stabilizer and contraction identity.
pub fn criterion_8() -> CriterionReport {
    run(8, "BCS obstruction for four fermions", |r| {
        let mins: Vec<f64> = (0..5u64).map(|s| bcs_obstruction(4, 8, 50, s).map(|o| o.min_value)).collect::<Result<_>>()?;
        let mean = mins.iter().sum::<f64>() / mins.len() as f64;
        let stable = mins.iter().all(|v| (v - mean).abs() <= 0.1 * mean);
        r.check(mins.iter().all(|&v| v > 0.0) && stable, format!("min |<a^b|psi_(4,8)>|^2 over 5 seeds: {mins:?}"));

        let bcs = bcs_state(4, 8)?;
        let esc = sov_escape_experiment(&bcs, 50, 0)?;
        r.check(
            esc.best_residual >= ESCAPE_THRESHOLD,
            format!("escape psi_(4,8): best relative residual {:.4} (threshold {ESCAPE_THRESHOLD})", esc.best_residual),
        );
        let mut worst = 0.0f64;
        for s in 0..5u64 {
            let e = sov_escape_experiment(&planted_state(8, 800 + s)?, 50, s)?;
            worst = worst.max(e.best_residual);
        }
        r.check(worst <= 1e-10, format!("planted rotated SOV states: worst relative residual {worst:.1e}"));

        let mut rng = seeded(801);
        let mut dev = 0.0f64;
        for _ in 0..100 {
            let blocks: Vec<_> = (0..4).map(|_| UnitaryMatrix::random_su2(&mut rng)).collect();
            let d = pair_block_unitary(8, &blocks)?;
            dev = dev.max(apply_unitary(&d, &bcs)?.distance(&bcs)?);
        }
        r.check(dev <= 1e-10, format!("block SU(2) stabilizer, 100 draws: largest change {dev:.1e}"));

        let contracted = FermionState::basis(8, &[7, 8])?.partial_inner(&bcs)?;
        r.check(contracted == extend_modes(&bcs_state(2, 6)?, 8)?, "<7^8|psi_(4,8)> = psi_(2,6) exactly");
        Ok(())
    })
}

/// 9. Dimension bounds.
pub fn criterion_9() -> CriterionReport {
    run(9, "dimension bounds", |r| {
        let mut ok = true;
        for m in 8..=30 {
            for n in 4..=m / 2 {
                let d = dims_report(m, n)?;
                ok &= d.sov_bundle < d.total && d.sov_bundle_below_total;
            }
        }
        r.check(ok, "D < C(M,N) for all 8 <= 2N <= M <= 30");
        let d = dims_report(6, 3)?;
        r.check(d.lower_bound == BigInt::from(5), format!("lower bound at (M,N) = (6,3): {}", d.lower_bound));

        let triples: Vec<[usize; 3]> =
            combination_masks(6, 3).into_iter().map(|s| Combination::from_mask(6, s).indices().try_into().expect("triple")).collect();
        let mut count = 0;
        let mut all = true;
        for keep in combination_masks(triples.len(), 4) {
            let excluded = triples.iter().enumerate().filter(|(i, _)| keep >> i & 1 == 0).map(|(_, t)| *t);
            let c = certify(&SubspaceSpec::new(6, excluded)?, CertifyOptions::default())?;
            all &= c.verdict == Verdict::NotUniversalDimBound;
            count += 1;
        }
        r.check(all, format!("all {count} four-dimensional m = 6 specs give NotUniversalDimBound"));
        Ok(())
    })
}

/// Dense antisymmetric tensor of a basis element: `Σ_σ sgn(σ) e_{s_σ(1)} ⊗ …`.
fn basis_tensor(m: usize, idx: &[usize]) -> Vec<f64> {
    let n = idx.len();
    let mut t = vec![0.0; m.pow(n as u32)];
    for_each_permutation(n, |perm, sign| {
        let pos = perm.iter().fold(0, |acc, &p| acc * m + (idx[p] - 1));
        t[pos] += sign;
    });
    t
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize], f64)) {
    fn rec(k: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, sign: f64, f: &mut dyn FnMut(&[usize], f64)) {
        let n = used.len();
        if k == n {
            f(perm, sign);
            return;
        }
        for i in 0..n {
            if !used[i] {
                // inversions created by placing i after the unused smaller ones
                let inv = (0..i).filter(|&j| !used[j]).count();
                used[i] = true;
                perm.push(i);
                rec(k + 1, perm, used, if inv % 2 == 0 { sign } else { -sign }, f);
                perm.pop();
                used[i] = false;
            }
        }
    }
    rec(0, &mut Vec::with_capacity(n), &mut vec![false; n], 1.0, &mut f);
}

fn tensor_product(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

/// `Σ_σ sgn(σ) t(i_σ(1), …, i_σ(k))` over all `k`-slot permutations.
fn antisymmetrize(m: usize, k: usize, t: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; t.len()];
    let mut digits = vec![0usize; k];
    for (pos, o) in out.iter_mut().enumerate() {
        let mut p = pos;
        for d in digits.iter_mut().rev() {
            *d = p % m;
            p /= m;
        }
        for_each_permutation(k, |perm, sign| {
            let src = perm.iter().fold(0, |acc, &q| acc * m + digits[q]);
            *o += sign * t[src];
        });
    }
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).product::<usize>() as f64
}

/// 10. Inner and partial inner products against antisymmetrized tensors.
pub fn criterion_10() -> CriterionReport {
    run(10, "tensor oracle for inner products and wedges", |r| {
        let mut pairs = 0usize;
        let mut ok = true;
        for m in 1..=5usize {
            for big in 1..=m {
                let rights = combination_masks(m, big);
                for small in 1..=big {
                    for &s in &combination_masks(m, small) {
                        let cs = Combination::from_mask(m, s);
                        let ts = basis_tensor(m, cs.indices());
                        let phi = FermionState::basis(m, cs.indices())?;
                        for &t in &rights {
                            let ct = Combination::from_mask(m, t);
                            let tt = basis_tensor(m, ct.indices());
                            let psi = FermionState::basis(m, ct.indices())?;
                            // contract the leading `small` slots
                            let rest = m.pow((big - small) as u32);
                            let mut contracted = vec![0.0; rest];
                            for (i, a) in ts.iter().enumerate() {
                                if *a != 0.0 {
                                    for j in 0..rest {
                                        contracted[j] += a * tt[i * rest + j];
                                    }
                                }
                            }
                            let ours = phi.partial_inner(&psi)?;
                            let mut expect = vec![0.0; rest];
                            if big == small {
                                expect[0] = ours.amps()[0].re * factorial(small);
                            } else {
                                for (c, a) in ours.terms() {
                                    let tc = basis_tensor(m, c.indices());
                                    for (e, v) in expect.iter_mut().zip(tc) {
                                        *e += a.re * v * factorial(small);
                                    }
                                }
                            }
                            ok &= contracted.iter().zip(&expect).all(|(a, b)| a == b);
                            if small == big {
                                let full: f64 = ts.iter().zip(&tt).map(|(a, b)| a * b).sum();
                                ok &= phi.inner(&psi)?.re * factorial(big) == full;
                            }
                            pairs += 1;
                        }
                    }
                }
            }
        }
        r.check(ok, format!("{pairs} basis pairs with m <= 5: partial inner = tensor contraction / n!, inner = tensor inner / N!"));

        let mut pairs = 0usize;
        let mut ok = true;
        for m in 2..=5usize {
            for a in 1..m {
                for b in 1..=m - a {
                    for &s in &combination_masks(m, a) {
                        for &t in &combination_masks(m, b) {
                            let (cs, ct) = (Combination::from_mask(m, s), Combination::from_mask(m, t));
                            let lhs = antisymmetrize(m, a + b, &tensor_product(&basis_tensor(m, cs.indices()), &basis_tensor(m, ct.indices())));
                            let w = FermionState::basis(m, cs.indices())?.wedge(&FermionState::basis(m, ct.indices())?)?;
                            let mut rhs = vec![0.0; lhs.len()];
                            for (c, z) in w.terms() {
                                for (e, v) in rhs.iter_mut().zip(basis_tensor(m, c.indices())) {
                                    *e += z.re * v * factorial(a) * factorial(b);
                                }
                            }
                            ok &= lhs == rhs;
                            pairs += 1;
                        }
                    }
                }
            }
        }
        r.check(ok, format!("{pairs} basis pairs with m <= 5: antisymmetrized tensor product = n!N! wedge"));
        Ok(())
    })
}

pub fn criteria() -> Vec<(u32, fn() -> CriterionReport)> {
    vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ]
}

/// Run the selected criteria (all when `only` is empty), in order.
pub fn run_all(only: &[u32]) -> Vec<CriterionReport> {
    criteria().into_iter().filter(|(id, _)| only.is_empty() || only.contains(id)).map(|(_, f)| f()).collect()
}
