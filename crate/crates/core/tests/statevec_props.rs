mod common;

use common::*;
use proptest::prelude::*;
use vqeforge::statevec::QuantumState;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_preserved(n in 1usize..=6, seed in any::<u64>()) {
        let n = n.max(2);
        let mut psi = QuantumState::zero(n).unwrap();
        psi.apply(&random_circuit(n, 80, seed)).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_restores_state(n in 2usize..=5, seed in any::<u64>()) {
        let circuit = random_circuit(n, 40, seed);
        let mut psi = QuantumState::zero(n).unwrap();
        psi.apply(&random_circuit(n, 10, seed ^ 1)).unwrap();
        let start = psi.clone();
        for g in circuit.gates() {
            psi.apply_gate(g).unwrap();
            psi.apply_gate(&g.inverse()).unwrap();
        }
        psi.apply(&circuit).unwrap();
        psi.apply(&circuit.inverse()).unwrap();
        for (a, b) in psi.amplitudes().iter().zip(start.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn matches_dense_oracle(n in 2usize..=5, seed in any::<u64>()) {
        let circuit = random_circuit(n, 50, seed);
        let mut psi = QuantumState::zero(n).unwrap();
        psi.apply(&circuit).unwrap();
        let want = circuit_oracle_state(&circuit);
        let dev = psi.amplitudes().iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-9, "deviation {dev:e}");
    }

    #[test]
    fn expectation_matches_dense(n in 2usize..=4, seed in any::<u64>(), h in arb_real_sum(4, 8)) {
        let h = vqeforge::pauli::PauliSum::from_terms(
            n,
            h.terms().iter().map(|t| vqeforge::pauli::PauliTerm::new(
                t.coeff,
                vqeforge::pauli::PauliString::new(t.string.ops()[..n].to_vec()).unwrap(),
            ).unwrap()),
        ).unwrap();
        let circuit = random_circuit(n, 20, seed);
        let mut psi = QuantumState::zero(n).unwrap();
        psi.apply(&circuit).unwrap();
        let v = M::from_column_slice(1 << n, 1, psi.amplitudes());
        let dense = (v.adjoint() * sum_matrix(&h) * &v)[(0, 0)].re;
        prop_assert!((psi.expectation(&h).unwrap() - dense).abs() < 1e-10);
    }
}

#[test]
fn layers_partition_gates() {
    let circuit = random_circuit(4, 60, 9);
    let total: usize = circuit.layers().map(|l| l.len()).sum();
    assert_eq!(total, circuit.len());
    for layer in circuit.layers() {
        let mut seen = std::collections::BTreeSet::new();
        for g in layer {
            for q in g.qubits() {
                assert!(seen.insert(q), "qubit {q} used twice in a layer");
            }
        }
    }
}

#[test]
fn sampling_follows_probabilities() {
    let circuit = random_circuit(3, 30, 4);
    let mut psi = QuantumState::zero(3).unwrap();
    psi.apply(&circuit).unwrap();
    let shots = 200_000;
    let hist = psi.sample_bitstrings(shots, 1).unwrap();
    for (idx, p) in psi.probabilities().iter().enumerate() {
        let key = vqeforge::statevec::bitstring(3, idx);
        let f = *hist.get(&key).unwrap_or(&0) as f64 / shots as f64;
        let sigma = (p * (1.0 - p) / shots as f64).sqrt();
        assert!((f - p).abs() < 5.0 * sigma + 1e-9, "{key}: {f} vs {p}");
    }
}
