//! QAOA on a ring: level-1 landscape optimum and deeper interpolation schedules.

use vqeforge::qaoa::{
    brute_force_maxcut, encode_maxcut, interpolation_schedule, qaoa_circuit, qaoa_grid_scan, success_probability,
    WeightedGraph,
};
use vqeforge::statevec::QuantumState;

fn main() -> vqeforge::Result<()> {
    let graph = WeightedGraph::cycle(6, 1.0)?;
    let enc = encode_maxcut(&graph)?;
    let optimum = brute_force_maxcut(&graph)?;

    let grid = qaoa_grid_scan(&graph, 41)?;
    let best = grid
        .iter()
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .expect("non-empty grid");
    println!(
        "level 1 best: β={:.3} γ={:.3}, expected cut {:.3} of {}",
        best.beta,
        best.gamma,
        enc.cut_from_energy(best.energy),
        optimum.value
    );

    for level in [1, 2, 4, 8, 16] {
        let c = qaoa_circuit(&enc.hamiltonian, &interpolation_schedule(level)?)?;
        let mut psi = QuantumState::zero(graph.n_nodes())?;
        psi.apply(&c)?;
        println!(
            "D={level:>2}: expected cut {:.3}, P(optimal) = {:.3}",
            enc.cut_from_energy(psi.expectation(&enc.hamiltonian)?),
            success_probability(&psi, &optimum)
        );
    }
    Ok(())
}
