use fermilu_core::polycert::*;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn naive_pairing(m: usize, forms: &[LinearForm], mu: &ExponentVector) -> BigInt {
    let mut p = MultiPoly::monomial(mu.clone(), BigInt::from(1));
    for f in forms {
        p = &p * &MultiPoly::linear(m, f).unwrap();
    }
    p.vandermonde_pairing()
}

fn all_triples(m: usize) -> Vec<[usize; 3]> {
    let mut v = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            for k in j + 1..=m {
                v.push([i, j, k]);
            }
        }
    }
    v
}

#[test]
fn closed_forms_agree_with_dp_including_sign() {
    for m in [6usize, 8] {
        let spec = SubspaceSpec::sov(m).unwrap();
        let mu = Multiplier::Monomial(default_multiplier(m));
        let dp = pairing_direct(&spec, &mu, PairingOptions::default()).unwrap().value;
        assert_eq!(dp, closed_form_even(m).unwrap(), "M = {m}");
    }
    let spec = SubspaceSpec::sov(7).unwrap();
    let mu = Multiplier::Monomial(default_multiplier(7));
    let dp = pairing_direct(&spec, &mu, PairingOptions::default()).unwrap().value;
    assert_eq!(dp, closed_form_odd(7).unwrap());
    assert_eq!(dp, BigInt::from(-96));
}

#[test]
fn m6_sov_value() {
    let spec = SubspaceSpec::sov(6).unwrap();
    let mu = Multiplier::Monomial(ExponentVector(vec![1, 0, 1, 0, 1, 0]));
    let out = pairing_direct(&spec, &mu, PairingOptions::default()).unwrap();
    assert_eq!(out.value, BigInt::from(-6));
    // the full expansion gives the same number
    assert_eq!(naive_pairing(6, &char_poly(&spec), &default_multiplier(6)), BigInt::from(-6));
}

#[test]
fn elimination_identity() {
    for m in [7usize, 9] {
        let spec = SubspaceSpec::minimal_odd(m).unwrap();
        let direct = pairing_direct(&spec, &Multiplier::One, PairingOptions::default()).unwrap().value;
        let reduced = pairing_eliminated(&spec, &Multiplier::One, PairingOptions::default()).unwrap().value;
        assert_eq!(direct, reduced, "M = {m}");
        assert!(!direct.is_zero());
        // also with the SOV spec and a monomial multiplier
        let sov = SubspaceSpec::sov(m).unwrap();
        let mu = Multiplier::Monomial(default_multiplier(m));
        let a = pairing_direct(&sov, &mu, PairingOptions::default()).unwrap().value;
        let b = pairing_eliminated(&sov, &mu, PairingOptions::default()).unwrap().value;
        assert_eq!(a, b, "SOV, M = {m}");
    }
}

#[test]
fn elimination_kills_multipliers_using_last_variable() {
    let sov = SubspaceSpec::sov(7).unwrap();
    let mut e = vec![2, 0, 2, 0, 1, 0, 1];
    let mu = Multiplier::Monomial(ExponentVector(e.clone()));
    let direct = pairing_direct(&sov, &mu, PairingOptions::default()).unwrap().value;
    assert!(direct.is_zero());
    assert!(pairing_eliminated(&sov, &mu, PairingOptions::default()).unwrap().value.is_zero());
    e[6] = 0;
    e[5] = 1;
    let mu = Multiplier::Monomial(ExponentVector(e));
    let a = pairing_direct(&sov, &mu, PairingOptions::default()).unwrap().value;
    let b = pairing_eliminated(&sov, &mu, PairingOptions::default()).unwrap().value;
    assert_eq!(a, b);
}

#[test]
fn certificate_values() {
    for (m, expected) in [(7usize, 48i64), (9, 10368)] {
        let c = certify(&SubspaceSpec::minimal_odd(m).unwrap(), CertifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Universal);
        assert_eq!(c.pairing.magnitude(), BigInt::from(expected).magnitude(), "M = {m}");
        assert!(!c.eliminated);
    }
    let c = certify(&SubspaceSpec::minimal_odd(11).unwrap(), CertifyOptions::default()).unwrap();
    assert!(c.eliminated);
    assert_eq!(c.verdict, Verdict::Universal);
    assert_eq!(c.pairing.magnitude(), BigInt::from(12431232).magnitude());
}

#[test]
fn minimal_even_specs_are_universal() {
    for m in [6usize, 8] {
        let c = certify(&SubspaceSpec::minimal_even(m).unwrap(), CertifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Universal, "M = {m}");
        assert_eq!(c.multipliers_tried, 1);
    }
}

#[test]
fn every_five_dimensional_bsov_subspace_at_m6_is_universal() {
    // 8 BSOVs at m = 6; keep any 5 of them
    let sov = SubspaceSpec::sov(6).unwrap();
    let bsov: Vec<[usize; 3]> = all_triples(6).into_iter().filter(|t| !sov.excluded().contains(t)).collect();
    assert_eq!(bsov.len(), 8);
    for a in 0..8 {
        for b in a + 1..8 {
            for c in b + 1..8 {
                let mut ex: Vec<[usize; 3]> = sov.excluded().iter().copied().collect();
                ex.extend([bsov[a], bsov[b], bsov[c]]);
                let spec = SubspaceSpec::new(6, ex).unwrap();
                assert_eq!(spec.dim(), 5);
                let cert = certify(&spec, CertifyOptions::default()).unwrap();
                assert_eq!(cert.verdict, Verdict::Universal);
            }
        }
    }
}

#[test]
fn dimension_bound_verdicts() {
    let triples = all_triples(6);
    for skip in 0..triples.len() {
        // keep four triples, one window per starting point
        let keep: Vec<[usize; 3]> = (0..4).map(|k| triples[(skip + k) % 20]).collect();
        let ex = triples.iter().filter(|t| !keep.contains(t)).copied();
        let spec = SubspaceSpec::new(6, ex).unwrap();
        assert_eq!(spec.dim(), 4);
        let c = certify(&spec, CertifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::NotUniversalDimBound);
    }
}

#[test]
fn sov_spec_with_multiplier_search() {
    let c = certify(&SubspaceSpec::sov(6).unwrap(), CertifyOptions::default()).unwrap();
    assert_eq!(c.verdict, Verdict::Universal);
    assert_eq!(c.multiplier, Multiplier::Monomial(default_multiplier(6)));
    assert_eq!(c.pairing, BigInt::from(-6));
}

#[test]
fn unknown_when_budget_exhausted() {
    let spec = SubspaceSpec::new(6, [[1, 2, 3]]).unwrap();
    let c = certify(&spec, CertifyOptions { multiplier_budget: 0, ..Default::default() }).unwrap();
    // the default multiplier has the wrong degree here, so nothing is tried
    assert_eq!(c.verdict, Verdict::Unknown);
}

#[test]
fn mirrored_coefficients_differ_and_closed_forms_are_nonzero() {
    for m in (6..=40).step_by(2) {
        let a = coeff_table(m).unwrap();
        for p in 0..m {
            assert_ne!(a.get(p), a.get(m - 1 - p), "even M = {m}, p = {p}");
        }
        assert!(!closed_form_even(m).unwrap().is_zero());
    }
    for m in (7..=41).step_by(2) {
        let a = coeff_table(m).unwrap();
        for p in 1..m {
            assert_ne!(a.get(p), a.get(m - p), "odd M = {m}, p = {p}");
        }
        assert!(!closed_form_odd(m).unwrap().is_zero());
    }
}

#[test]
fn even_rows_increase_to_the_middle() {
    for m in (6..=40).step_by(2) {
        let a = coeff_table(m).unwrap();
        for p in 1..m / 2 {
            assert!(a.get(p) > a.get(p - 1), "M = {m}, p = {p}");
        }
    }
}

#[test]
fn orbit_bundle_is_below_total_dimension() {
    for m in 8..=30 {
        for n in 4..=m / 2 {
            let d = dims_report(m, n).unwrap();
            assert!(d.sov_bundle_below_total, "M = {m}, N = {n}");
        }
    }
    assert_eq!(dims_report(6, 3).unwrap().lower_bound, BigInt::from(5));
}

fn spec_strategy(m: usize) -> impl Strategy<Value = (Vec<[usize; 3]>, Vec<u32>)> {
    let triples = all_triples(m);
    let delta = m * (m - 1) / 2;
    let most = delta.min(triples.len());
    proptest::sample::subsequence(triples, 0..=most).prop_flat_map(move |ex| {
        let need = delta - ex.len();
        (Just(ex), proptest::collection::vec(0..m, need).prop_map(move |slots| {
            let mut e = vec![0u32; m];
            for s in slots {
                e[s] += 1;
            }
            e
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prune_is_sound((ex, e) in (3usize..=6).prop_flat_map(spec_strategy)) {
        let m = e.len();
        let forms: Vec<LinearForm> = ex.iter().map(|t| LinearForm(t.to_vec())).collect();
        let mu = ExponentVector(e);
        let oracle = naive_pairing(m, &forms, &mu);
        let mul = Multiplier::Monomial(mu);
        let on = vandermonde_pairing(m, &forms, &mul, PairingOptions { prune: true }).unwrap();
        let off = vandermonde_pairing(m, &forms, &mul, PairingOptions { prune: false }).unwrap();
        prop_assert_eq!(&on.value, &oracle);
        prop_assert_eq!(&off.value, &oracle);
    }

    #[test]
    fn relabeling_variables_multiplies_by_the_sign(
        (ex, e) in spec_strategy(6),
        perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let forms: Vec<LinearForm> = ex.iter().map(|t| LinearForm(t.to_vec())).collect();
        let mu = Multiplier::Monomial(ExponentVector(e.clone()));
        let base = vandermonde_pairing(6, &forms, &mu, PairingOptions::default()).unwrap().value;
        let moved: Vec<LinearForm> = forms.iter().map(|f| LinearForm(f.vars().iter().map(|&v| perm[v - 1] + 1).collect())).collect();
        let mut pe = vec![0u32; 6];
        for (i, &x) in e.iter().enumerate() {
            pe[perm[i]] = x;
        }
        let moved_mu = Multiplier::Monomial(ExponentVector(pe));
        let after = vandermonde_pairing(6, &moved, &moved_mu, PairingOptions::default()).unwrap().value;
        let sign = ExponentVector(perm.iter().map(|&x| x as u32).collect()).permutation_sign().unwrap();
        prop_assert_eq!(after, base * sign);
    }
}
