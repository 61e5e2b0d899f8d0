mod common;

use proptest::prelude::*;
use vqeforge::ansatz::{HeuristicAnsatzSpec, RotationScheme};
use vqeforge::qaoa::{
    brute_force_maxcut, encode_maxcut, interpolation_schedule, qaoa_circuit, success_probability, QaoaSchedule,
    WeightedGraph,
};
use vqeforge::statevec::{Gate, QuantumState};

fn arb_graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..=8)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let k = pairs.len();
            (
                Just(n),
                Just(pairs),
                prop::collection::vec(prop::option::weighted(0.6, 1u32..=5), k),
            )
        })
        .prop_map(|(n, pairs, weights)| {
            let edges = pairs
                .into_iter()
                .zip(weights)
                .filter_map(|((i, j), w)| w.map(|w| (i, j, w as f64)));
            WeightedGraph::new(n, edges).unwrap()
        })
}

fn random_state(n: usize, seed: u64) -> QuantumState {
    let mut psi = QuantumState::zero(n).unwrap();
    psi.apply(&common::random_circuit(n.max(2), 25, seed)).unwrap_or(());
    psi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ground_energy_gives_max_cut(g in arb_graph()) {
        let enc = encode_maxcut(&g).unwrap();
        prop_assert!(enc.hamiltonian.is_diagonal());
        let m = common::sum_matrix(&enc.hamiltonian);
        let lambda_min = (0..m.nrows()).map(|i| m[(i, i)].re).fold(f64::INFINITY, f64::min);
        let cut = (g.total_weight() - lambda_min) / 2.0;
        let opt = brute_force_maxcut(&g).unwrap();
        prop_assert!((cut - opt.value).abs() < 1e-9);
        prop_assert!((cut - cut.round()).abs() < 1e-9);
        prop_assert!((enc.cut_from_energy(lambda_min) - opt.value).abs() < 1e-9);
    }

    #[test]
    fn cost_layer_only_changes_phases(g in arb_graph(), gamma in -3.0f64..3.0, seed in any::<u64>()) {
        let n = g.n_nodes();
        let enc = encode_maxcut(&g).unwrap();
        let mut psi = random_state(n, seed);
        let before = psi.probabilities();
        for t in enc.hamiltonian.terms() {
            psi.apply_gate(&Gate::PauliExp { angle: gamma * t.coeff.re, string: t.string.clone() }).unwrap();
        }
        for (a, b) in before.iter().zip(psi.probabilities()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn global_spin_flip_is_a_symmetry(g in arb_graph(), seed in any::<u64>()) {
        let n = g.n_nodes();
        let enc = encode_maxcut(&g).unwrap();
        let mut psi = random_state(n, seed);
        let e = psi.expectation(&enc.hamiltonian).unwrap();
        for q in 0..n {
            psi.apply_gate(&Gate::rx(q, std::f64::consts::PI)).unwrap();
        }
        prop_assert!((psi.expectation(&enc.hamiltonian).unwrap() - e).abs() < 1e-10);
        let opt = brute_force_maxcut(&g).unwrap();
        let all = (1usize << n) - 1;
        for &idx in &opt.optimal {
            prop_assert!(opt.optimal.contains(&(idx ^ all)));
        }
    }

    #[test]
    fn real_ansatz_and_qaoa_states(g in arb_graph(), d in 0usize..3, seed in any::<u64>()) {
        let n = g.n_nodes();
        let spec = HeuristicAnsatzSpec::new(n, d, RotationScheme::YOnly);
        let theta = vqeforge::vqe::InitialPoint::Random { seed }.resolve(spec.parameter_count()).unwrap();
        let theta: Vec<f64> = theta.iter().map(|t| t * 30.0).collect();
        let mut psi = QuantumState::zero(n).unwrap();
        psi.apply(&spec.circuit(&theta).unwrap()).unwrap();
        for a in psi.amplitudes() {
            prop_assert!(a.im.abs() < 1e-12);
        }
        let opt = brute_force_maxcut(&g).unwrap();
        let p = success_probability(&psi, &opt);
        let direct: f64 = opt.optimal.iter().map(|&i| psi.probabilities()[i]).sum();
        prop_assert!((p - direct).abs() < 1e-12);
    }
}

#[test]
fn schedule_parameters_round_trip() {
    let s = QaoaSchedule::new(vec![0.1, 0.2, 0.3], vec![1.0, 2.0, 3.0]).unwrap();
    assert_eq!(QaoaSchedule::from_parameters(&s.to_parameters()).unwrap(), s);
    assert!(QaoaSchedule::from_parameters(&[0.1, 0.2, 0.3]).is_err());
}

#[test]
fn interpolation_improves_with_level() {
    let g = WeightedGraph::cycle(4, 1.0).unwrap();
    let enc = encode_maxcut(&g).unwrap();
    let opt = brute_force_maxcut(&g).unwrap();
    let p = |level: usize| {
        let mut psi = QuantumState::zero(4).unwrap();
        psi.apply(&qaoa_circuit(&enc.hamiltonian, &interpolation_schedule(level).unwrap()).unwrap())
            .unwrap();
        success_probability(&psi, &opt)
    };
    let (p1, p10) = (p(1), p(10));
    assert!(p10 > 0.9 && p10 > p1, "p1={p1} p10={p10}");
}

#[test]
fn graph_file_errors_carry_line_numbers() {
    let err = "0 1 1\n# c\n1 1 2\n".parse::<WeightedGraph>().unwrap_err();
    assert!(matches!(err, vqeforge::Error::Syntax { line: 3, .. }), "{err}");
    let err = "0 1 1\n1 0 2\n".parse::<WeightedGraph>().unwrap_err();
    assert!(matches!(err, vqeforge::Error::Syntax { line: 2, .. }), "{err}");
}
