use num_complex::Complex64 as C64;
use proptest::prelude::*;

use hqis_core::protocol::{Correction, SecretSpec};
use hqis_core::qmath::{Basis, DensityMatrix, EulerAngles, SingleQubitOp, StateVector};

const LABELS: [char; 5] = ['p', 'q', 'r', 's', 't'];

fn state(max_qubits: usize) -> impl Strategy<Value = StateVector> {
    (1..=max_qubits).prop_flat_map(|n| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
            .prop_filter("nonzero", |v| {
                v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3
            })
            .prop_map(move |v| {
                let amps = v.into_iter().map(|(a, b)| C64::new(a, b)).collect();
                StateVector::from_amplitudes(LABELS[..n].to_vec(), amps).unwrap()
            })
    })
}

fn angles() -> impl Strategy<Value = EulerAngles> {
    (0.0f64..std::f64::consts::PI, -3.2f64..3.2, -3.2f64..3.2)
        .prop_map(|(theta, phi, lambda)| EulerAngles { theta, phi, lambda })
}

fn phase() -> impl Strategy<Value = C64> {
    (-3.2f64..3.2).prop_map(|t| C64::from_polar(1.0, t))
}

proptest! {
    #[test]
    fn unitaries_preserve_norm(psi in state(4), a in angles(), k in 0usize..4) {
        let label = psi.labels()[k % psi.num_qubits()];
        let out = psi.apply_single(label, &SingleQubitOp::from_euler(a)).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_probabilities_are_complete(psi in state(4), k in 0usize..4) {
        let label = psi.labels()[k % psi.num_qubits()];
        for basis in Basis::ALL {
            let p = psi.outcome_probabilities(label, basis).unwrap();
            prop_assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
            prop_assert!(p.iter().all(|&x| x >= -1e-15));
        }
    }

    #[test]
    fn bell_probabilities_are_complete(psi in state(4)) {
        prop_assume!(psi.num_qubits() >= 2);
        let l = psi.labels();
        let p = psi.bell_probabilities(l[0], l[l.len() - 1]).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tracing_nothing_out_gives_the_projector(psi in state(3)) {
        let rho = psi.partial_trace(psi.labels()).unwrap();
        prop_assert!(rho.max_abs_diff(&DensityMatrix::from_pure(&psi)) < 1e-14);
        prop_assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn reduced_states_are_physical(psi in state(4), k in 0usize..4) {
        let label = psi.labels()[k % psi.num_qubits()];
        let rho = psi.partial_trace(&[label]).unwrap();
        prop_assert!(rho.hermiticity_defect() < 1e-14);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues().iter().all(|&e| e > -1e-12));
    }

    #[test]
    fn fidelity_is_symmetric_and_phase_blind(
        (a, b) in (1usize..=3).prop_flat_map(|n| (state(n).prop_filter("n", move |s| s.num_qubits() == n),
                                                  state(n).prop_filter("n", move |s| s.num_qubits() == n))),
        z in phase(),
    ) {
        let fab = a.fidelity_pure(&b).unwrap();
        prop_assert!((fab - b.fidelity_pure(&a).unwrap()).abs() < 1e-12);
        let shifted = StateVector::from_amplitudes(
            b.labels().to_vec(),
            b.amplitudes().iter().map(|x| x * z).collect(),
        ).unwrap();
        prop_assert!((fab - a.fidelity_pure(&shifted).unwrap()).abs() < 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&fab));
        prop_assert!(b.equal_up_to_phase(&shifted, 1e-12).unwrap());
    }

    #[test]
    fn entropy_of_cut_equals_complement(psi in state(4), mask in 1usize..15) {
        let n = psi.num_qubits();
        prop_assume!(n >= 2);
        let mask = mask % ((1 << n) - 1);
        prop_assume!(mask != 0);
        let labels = psi.labels();
        let cut: Vec<char> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| labels[i]).collect();
        let rest: Vec<char> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| labels[i]).collect();
        let e1 = psi.entanglement_entropy(&cut).unwrap();
        let e2 = psi.entanglement_entropy(&rest).unwrap();
        prop_assert!((e1 - e2).abs() < 1e-9, "{} vs {}", e1, e2);
    }

    #[test]
    fn euler_angles_round_trip(a in angles()) {
        let u = SingleQubitOp::from_euler(a);
        prop_assert!(u.unitarity_defect() < 1e-14);
        prop_assert!(SingleQubitOp::from_euler(u.euler_angles()).equiv_up_to_phase(&u, 1e-9));
    }

    #[test]
    fn correction_words_are_unitary(word in "[IXZH]{1,6}") {
        let c: Correction = word.parse().unwrap();
        prop_assert!(c.matrix().unitarity_defect() < 1e-14);
        prop_assert_eq!(c.to_string(), word);
    }

    #[test]
    fn secrets_are_normalized(re_a in -5.0f64..5.0, im_a in -5.0f64..5.0, re_b in -5.0f64..5.0, im_b in -5.0f64..5.0) {
        prop_assume!(re_a.abs() + im_a.abs() + re_b.abs() + im_b.abs() > 1e-6);
        let s = SecretSpec::from_amplitudes(C64::new(re_a, im_a), C64::new(re_b, im_b)).unwrap();
        prop_assert!(s.is_normalized());
        prop_assert!(s.alpha().im == 0.0 && s.alpha().re >= 0.0);
    }
}
