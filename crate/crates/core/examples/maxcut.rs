//! MaxCut on the 4-node diamond graph with a real-amplitude heuristic ansatz.

use vqeforge::ansatz::{HeuristicAnsatzSpec, RotationScheme};
use vqeforge::qaoa::{solve_maxcut_vqe, MaxCutAnsatz, MaxCutSettings, WeightedGraph};
use vqeforge::vqe::InitialPoint;

fn main() -> vqeforge::Result<()> {
    let graph = WeightedGraph::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/diamond.edges"))?;
    let ansatz = MaxCutAnsatz::Heuristic(HeuristicAnsatzSpec::new(graph.n_nodes(), 3, RotationScheme::YOnly));
    let settings = MaxCutSettings::new(ansatz, 100, 0);
    let sol = solve_maxcut_vqe(&graph, &settings, &InitialPoint::Random { seed: 0 })?;
    println!(
        "optimal cuts {:?} of value {}",
        sol.optimum.bitstrings(graph.n_nodes()),
        sol.optimum.value
    );
    println!("success probability {:.4}", sol.success_probability);
    println!("most frequent sample {} with cut {}", sol.solution, sol.solution_cut);
    for (bits, count) in &sol.histogram {
        println!("  {bits} {count:>5} {}", "#".repeat((*count as usize).div_ceil(16)));
    }
    Ok(())
}
