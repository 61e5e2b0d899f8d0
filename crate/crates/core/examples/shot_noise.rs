//! Shot-based energy estimates shrink as 1/√s.

use vqeforge::ansatz::{HeuristicAnsatzSpec, RotationScheme};
use vqeforge::estimator::{estimate, exact_expectation, EstimationMode};
use vqeforge::fermion::h2_hamiltonian;
use vqeforge::statevec::QuantumState;

fn main() -> vqeforge::Result<()> {
    let h = h2_hamiltonian();
    let spec = HeuristicAnsatzSpec::new(2, 1, RotationScheme::Yz);
    let theta: Vec<f64> = (0..spec.parameter_count()).map(|k| 0.4 * k as f64 - 1.0).collect();
    let mut psi = QuantumState::zero(2)?;
    psi.apply(&spec.circuit(&theta)?)?;
    println!(
        "exact <H> = {:.6}; {} measurement groups",
        exact_expectation(&psi, &h)?,
        h.group_commuting().len()
    );
    for shots in [64, 256, 1024, 4096, 16384] {
        let e = estimate(&psi, &h, EstimationMode::Shots { shots, seed: 7 })?;
        println!(
            "s={shots:>6}: {:.6} ± {:.6} (σ·√s = {:.3})",
            e.value,
            e.std_error,
            e.std_error * (shots as f64).sqrt()
        );
    }
    Ok(())
}
