//! Energy-vs-distance table over a directory of Hamiltonian files.
//!
//! Pass a directory as the first argument; the default holds the equilibrium
//! H₂ point only. Add `h2_<distance>.ham` files to extend the curve.

use std::path::PathBuf;

use vqeforge::ansatz::{HeuristicAnsatzSpec, RotationScheme};
use vqeforge::fermion::h2_hamiltonian;
use vqeforge::optimize::{Optimizer, OptimizerConfig};
use vqeforge::vqe::{dissociation_curve, AnsatzChoice, InitialPoint, VqeProblem};

fn main() -> vqeforge::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/h2_curve")));
    let ansatz = AnsatzChoice::Heuristic(HeuristicAnsatzSpec::new(2, 4, RotationScheme::Yz));
    let config = OptimizerConfig {
        max_iterations: 300,
        ..Default::default()
    };
    let template = VqeProblem::new(h2_hamiltonian(), ansatz)?.with_optimizer(Optimizer::Spsa, config);
    println!("{:>8} {:>14} {:>14} {:>10}", "distance", "exact", "vqe", "error");
    for p in dissociation_curve(&dir, &template, &InitialPoint::Random { seed: 0 })? {
        println!(
            "{:>8} {:>14.8} {:>14.8} {:>10.2e}",
            p.distance,
            p.ground_energy,
            p.vqe_energy,
            p.vqe_energy - p.ground_energy
        );
    }
    Ok(())
}
