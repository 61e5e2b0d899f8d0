//! H₂ ground state by VQE for entangler depths D = 0…4.

use vqeforge::ansatz::{HeuristicAnsatzSpec, RotationScheme};
use vqeforge::fermion::h2_hamiltonian;
use vqeforge::optimize::{Optimizer, OptimizerConfig};
use vqeforge::vqe::{exact_ground_energy, run_vqe, AnsatzChoice, InitialPoint, VqeProblem};

fn main() -> vqeforge::Result<()> {
    let h = h2_hamiltonian();
    let e0 = exact_ground_energy(&h)?;
    println!("exact ground energy {e0:.6} Ha");
    for depth in 0..=4 {
        let ansatz = AnsatzChoice::Heuristic(HeuristicAnsatzSpec::new(2, depth, RotationScheme::Yz));
        let config = OptimizerConfig {
            max_iterations: 300,
            seed: 0,
            ..Default::default()
        };
        let problem = VqeProblem::new(h.clone(), ansatz)?.with_optimizer(Optimizer::Spsa, config);
        let r = run_vqe(&problem, &InitialPoint::Random { seed: 0 })?;
        println!(
            "D={depth}: E = {:.6} Ha, error {:.2e} ({:.0}% of |E0|), {} evaluations",
            r.estimate.value,
            r.estimate.value - e0,
            100.0 * (r.estimate.value - e0) / e0.abs(),
            r.trace.evaluations()
        );
    }
    Ok(())
}
