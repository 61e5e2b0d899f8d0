//! UCCSD on four spin-orbitals with two electrons: number conservation and a
//! VQE run on a small Hubbard-like Hamiltonian.

use vqeforge::ansatz::UccsdSpec;
use vqeforge::fermion::{build_molecular_hamiltonian, jordan_wigner, number_operator, MolecularCoefficients};
use vqeforge::optimize::{Optimizer, OptimizerConfig};
use vqeforge::statevec::QuantumState;
use vqeforge::vqe::{exact_ground_energy, run_vqe, AnsatzChoice, InitialPoint, VqeProblem};

fn main() -> vqeforge::Result<()> {
    let spec = UccsdSpec::closed_shell(4, 2, 2)?;
    println!("excitations:");
    for e in spec.excitations() {
        println!("  {e}");
    }

    let theta: Vec<f64> = (0..spec.parameter_count()).map(|k| 0.3 * (k as f64 + 1.0)).collect();
    let mut psi = QuantumState::zero(4)?;
    psi.apply(&spec.circuit(&theta, &spec.hartree_fock_reference())?)?;
    println!("<N> = {:.12}", psi.expectation(&number_operator(4))?);

    // Two sites, two spins each: modes (0,1) on site A, (2,3) on site B.
    let mut c = MolecularCoefficients::zeros(4);
    for (i, j) in [(0, 2), (1, 3)] {
        c.set_t(i, j, -1.0);
        c.set_t(j, i, -1.0);
    }
    c.set_u(0, 0, 1, 1, 2.0);
    c.set_u(2, 2, 3, 3, 2.0);
    let h = jordan_wigner(&build_molecular_hamiltonian(&c)).into_real(1e-12)?;

    let config = OptimizerConfig {
        max_iterations: 300,
        seed: 1,
        ..Default::default()
    };
    let problem = VqeProblem::new(h.clone(), AnsatzChoice::uccsd(spec))?.with_optimizer(Optimizer::NelderMead, config);
    let r = run_vqe(
        &problem,
        &InitialPoint::Given(vec![0.0; problem.ansatz.parameter_count()]),
    )?;
    println!(
        "UCCSD energy {:.6}, exact ground energy {:.6}, <N> = {:.6}",
        r.estimate.value,
        exact_ground_energy(&h)?,
        r.state.expectation(&number_operator(4))?
    );
    Ok(())
}
