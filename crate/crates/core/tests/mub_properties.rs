use mub_shadow::gf2::BitVector;
use mub_shadow::mub::MubFamily;
use mub_shadow::sim::{apply_circuit_inverse, StateVector, C64};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn projector_sum(fam: &MubFamily, bases: std::ops::Range<usize>) -> DMatrix<C64> {
    let n = fam.num_qubits();
    let d = 1usize << n;
    let mut s = DMatrix::<C64>::zeros(d, d);
    for j in bases {
        for k in 0..d as u64 {
            s += fam.mub_state(j, BitVector::new(n, k)).unwrap().projector().0;
        }
    }
    s
}

#[test]
fn every_basis_is_complete() {
    for n in 1..=4 {
        let fam = MubFamily::build(n).unwrap();
        let d = 1usize << n;
        for j in 0..fam.num_bases() {
            let s = projector_sum(&fam, j..j + 1);
            assert!((s - DMatrix::<C64>::identity(d, d)).norm() < 1e-10, "n={n} basis {j}");
        }
    }
}

#[test]
fn family_frame_operator_is_scaled_identity() {
    for n in 1..=4 {
        let fam = MubFamily::build(n).unwrap();
        let d = 1usize << n;
        let s = projector_sum(&fam, 0..fam.num_bases());
        let target = DMatrix::<C64>::identity(d, d) * C64::new((d + 1) as f64, 0.0);
        assert!((s - target).norm() < 1e-9, "n={n}");
    }
}

#[test]
fn hadamard_basis_is_basis_one() {
    let fam = MubFamily::build(2).unwrap();
    let plus = fam.mub_state(1, BitVector::zeros(2)).unwrap();
    assert!(plus.amps().iter().all(|a| (a - C64::new(0.5, 0.0)).norm() < 1e-12));
}

#[test]
fn circuits_match_states_at_five_and_six_qubits() {
    for n in [5usize, 6] {
        let fam = MubFamily::build(n).unwrap();
        for j in [1, 2, fam.num_bases() / 2, fam.num_bases() - 1] {
            let c = fam.emit_circuit(j).unwrap();
            for k in [0u64, 1, (1 << n) - 1, 0b10101 & ((1 << n) - 1)] {
                let b = BitVector::new(n, k);
                let built = apply_circuit_inverse(&c, &StateVector::basis(b)).unwrap();
                assert!(built.equal_up_to_phase(&fam.mub_state(j, b).unwrap(), 1e-10), "n={n} j={j} k={k}");
            }
        }
    }
}

#[test]
fn rejects_out_of_range_sizes() {
    assert!(MubFamily::build(0).is_err());
    assert!(MubFamily::build(17).is_err());
    assert!(MubFamily::build(3).unwrap().emit_circuit(0).is_err());
    assert!(MubFamily::build(3).unwrap().mub_state(9, BitVector::zeros(3)).is_err());
}

#[test]
fn verification_passes_up_to_eight_qubits() {
    for n in 1..=8 {
        let r = MubFamily::build(n).unwrap().verify_unbiased(1e-10).unwrap();
        assert!(r.passed(), "n={n}: {r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn amplitude_matches_dense_state(n in 1usize..=7, j in 0usize..129, k in 0u64..128, l in 0u64..128) {
        let fam = MubFamily::build(n).unwrap();
        let j = j % fam.num_bases();
        let mask = (1u64 << n) - 1;
        let (k, l) = (BitVector::new(n, k & mask), BitVector::new(n, l & mask));
        let state = fam.mub_state(j, k).unwrap();
        prop_assert!((fam.amplitude(j, k, l) - state.amps()[l.index()]).norm() < 1e-12);
        if j > 0 {
            prop_assert!((fam.amplitude(j, k, l).norm_sqr() - 1.0 / (1u64 << n) as f64).abs() < 1e-12);
        }
    }
}
