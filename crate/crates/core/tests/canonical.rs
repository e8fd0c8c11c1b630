use fermilu_core::canonical::{canonical_3in5, reduce_to_sov, takagi_2vector, SovOptions};
use fermilu_core::multilinear::apply_unitary;
use fermilu_core::rng::seeded;
use fermilu_core::states::is_sov;
use fermilu_core::{FermionState, UnitaryMatrix};

#[test]
fn takagi_coefficients_ignore_rotations() {
    let mut rng = seeded(31);
    for m in [4usize, 6, 7] {
        let psi = FermionState::random(m, 2, &mut rng).unwrap();
        let base = takagi_2vector(&psi).unwrap();
        for _ in 0..100 {
            let rotated = apply_unitary(&UnitaryMatrix::haar_random(m, &mut rng), &psi).unwrap();
            let f = takagi_2vector(&rotated).unwrap();
            assert_eq!(f.coeffs.len(), base.coeffs.len());
            for (a, b) in f.coeffs.iter().zip(&base.coeffs) {
                assert!((a - b).abs() <= 1e-9, "m = {m}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn takagi_transform_reaches_the_canonical_state() {
    let mut rng = seeded(32);
    for m in 2..=9 {
        let psi = FermionState::random(m, 2, &mut rng).unwrap();
        let f = takagi_2vector(&psi).unwrap();
        let out = apply_unitary(&f.transform, &psi).unwrap();
        assert!(out.distance(&f.canonical_state().unwrap()).unwrap() <= 1e-9 * psi.norm());
        assert!(f.coeffs.iter().all(|&c| c > 0.0));
    }
}

#[test]
fn dimension_five_form_ignores_rotations() {
    let mut rng = seeded(33);
    let psi = FermionState::random(5, 3, &mut rng).unwrap();
    let base = canonical_3in5(&psi).unwrap();
    assert!(apply_unitary(&base.transform, &psi).unwrap().distance(&base.canonical_state().unwrap()).unwrap() <= 1e-9);
    for _ in 0..100 {
        let f = canonical_3in5(&apply_unitary(&UnitaryMatrix::haar_random(5, &mut rng), &psi).unwrap()).unwrap();
        assert!((f.c1 - base.c1).abs() <= 1e-9 && (f.c2 - base.c2).abs() <= 1e-9);
    }
}

#[test]
fn reduction_output_is_single_occupancy_with_unitary_transform() {
    for (i, m) in (5..=8).enumerate() {
        let psi = FermionState::random(m, 3, &mut seeded(40 + i as u64)).unwrap();
        let r = reduce_to_sov(&psi, SovOptions::default()).unwrap();
        assert!(r.success);
        assert!(r.transform.deviation() <= 1e-9);
        assert!(apply_unitary(&r.transform, &psi).unwrap().distance(&r.reduced).unwrap() <= 1e-9);
        assert!(is_sov(&r.reduced, 1e-6).unwrap().is_sov);
    }
}

#[test]
fn reduction_is_deterministic() {
    let psi = FermionState::random(8, 3, &mut seeded(50)).unwrap();
    let a = reduce_to_sov(&psi, SovOptions { seed: 9, ..Default::default() }).unwrap();
    let b = reduce_to_sov(&psi, SovOptions { seed: 9, ..Default::default() }).unwrap();
    assert_eq!(a.reduced, b.reduced);
    assert_eq!(a.restart_values, b.restart_values);
}

#[test]
fn reduction_rejects_other_particle_numbers() {
    assert!(reduce_to_sov(&FermionState::random(6, 2, &mut seeded(1)).unwrap(), SovOptions::default()).is_err());
    assert!(reduce_to_sov(&FermionState::random(4, 3, &mut seeded(1)).unwrap(), SovOptions::default()).is_err());
    assert!(reduce_to_sov(&FermionState::zeros(6, 3).unwrap(), SovOptions::default()).is_err());
}
