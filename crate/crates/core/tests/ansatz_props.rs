mod common;

use proptest::prelude::*;
use vqeforge::ansatz::{Entangler, HeuristicAnsatzSpec, RotationScheme, UccsdSpec};
use vqeforge::fermion::number_operator;
use vqeforge::statevec::{Gate, QuantumState};

fn schemes() -> impl Strategy<Value = RotationScheme> {
    prop_oneof![
        Just(RotationScheme::ZxzFull),
        Just(RotationScheme::Yz),
        Just(RotationScheme::YOnly)
    ]
}

fn entanglers() -> impl Strategy<Value = Entangler> {
    prop_oneof![
        Just(Entangler::CzLinearChain),
        Just(Entangler::CzAllPairs),
        Just(Entangler::CnotLinearChain)
    ]
}

fn rotations_in(spec: &HeuristicAnsatzSpec, theta: &[f64]) -> usize {
    spec.circuit(theta)
        .unwrap()
        .gates()
        .iter()
        .filter(|g| matches!(g, Gate::Rotation { .. }))
        .count()
}

#[test]
fn parameter_counts_by_enumeration() {
    for n in 1..=8 {
        for d in 0..=4 {
            for (scheme, formula) in [
                (RotationScheme::ZxzFull, n * (3 * d + 2)),
                (RotationScheme::Yz, 2 * n * (d + 1)),
                (RotationScheme::YOnly, n * (d + 1)),
            ] {
                let spec = HeuristicAnsatzSpec::new(n, d, scheme);
                assert_eq!(spec.parameter_count(), formula, "{scheme:?} n={n} d={d}");
                assert_eq!(rotations_in(&spec, &vec![0.1; formula]), formula);
                assert!(spec.circuit(&vec![0.1; formula + 1]).is_err());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heuristic_states_are_normalized(
        n in 1usize..=5, d in 0usize..=3, scheme in schemes(), ent in entanglers(), seed in any::<u64>(),
    ) {
        let spec = HeuristicAnsatzSpec::new(n, d, scheme).with_entangler(ent);
        let theta = random_angles(spec.parameter_count(), seed);
        let mut psi = QuantumState::zero(n).unwrap();
        psi.apply(&spec.circuit(&theta).unwrap()).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_angles_leave_vacuum(n in 1usize..=6, d in 0usize..=4, scheme in schemes(), ent in entanglers()) {
        let spec = HeuristicAnsatzSpec::new(n, d, scheme).with_entangler(ent);
        let mut psi = QuantumState::zero(n).unwrap();
        psi.apply(&spec.circuit(&vec![0.0; spec.parameter_count()]).unwrap()).unwrap();
        prop_assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uccsd_conserves_particle_number(steps in prop_oneof![Just(1usize), Just(2), Just(4)], seed in any::<u64>()) {
        let spec = UccsdSpec::closed_shell(4, 2, steps).unwrap();
        let theta = random_angles(spec.parameter_count(), seed);
        let mut psi = QuantumState::zero(4).unwrap();
        psi.apply(&spec.circuit(&theta, &spec.hartree_fock_reference()).unwrap()).unwrap();
        prop_assert!((psi.expectation(&number_operator(4)).unwrap() - 2.0).abs() < 1e-10);
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn uccsd_counts() {
    for (modes, electrons, want) in [(4, 2, 4 + 1), (6, 2, 8 + 6), (6, 4, 8 + 6), (4, 1, 3)] {
        let spec = UccsdSpec::closed_shell(modes, electrons, 1).unwrap();
        assert_eq!(spec.parameter_count(), want, "{modes} modes, {electrons} electrons");
        assert_eq!(spec.excitations().len(), want);
    }
}

fn random_angles(k: usize, seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| r.random_range(-3.2..3.2)).collect()
}
