//! Richardson extrapolation of a two-qubit expectation value under amplitude damping.

use vqeforge::noise::{
    circuit_to_schedule, mitigated_expectation, DensityMatrix, ExtrapolationPlan, NoiseKind, NoiseModel,
};
use vqeforge::pauli::parse_hamiltonian;
use vqeforge::statevec::{Circuit, Gate, QuantumState};

fn main() -> vqeforge::Result<()> {
    let mut c = Circuit::new(2);
    c.extend([
        Gate::ry(0, 1.1),
        Gate::ry(1, -0.6),
        Gate::Cz(0, 1),
        Gate::ry(0, 0.8),
        Gate::rx(1, 0.5),
        Gate::Cz(0, 1),
        Gate::ry(1, 0.9),
    ])?;
    let observable = parse_hamiltonian("1 ZZ\n0.5 XI\n0.3 IX\n")?;
    let schedule = circuit_to_schedule(&c, 1.0)?;
    let mut psi = QuantumState::zero(2)?;
    psi.apply(&c)?;
    let ideal = psi.expectation(&observable)?;
    let rho0 = DensityMatrix::zero(2)?;
    println!("noiseless {ideal:.10}, T = {}", schedule.total_time());
    println!("{:>8} {:>12} {:>12} {:>12}", "λT", "raw", "c=(1,2)", "c=(1,2,3)");
    for lambda_t in [0.002, 0.005, 0.01, 0.02] {
        let noise = NoiseModel::new(NoiseKind::AmplitudeDamping, lambda_t / schedule.total_time())?;
        let m1 = mitigated_expectation(
            &rho0,
            &schedule,
            &noise,
            &observable,
            &ExtrapolationPlan::new(vec![1.0, 2.0])?,
        )?;
        let m2 = mitigated_expectation(
            &rho0,
            &schedule,
            &noise,
            &observable,
            &ExtrapolationPlan::new(vec![1.0, 2.0, 3.0])?,
        )?;
        println!(
            "{lambda_t:>8} {:>12.3e} {:>12.3e} {:>12.3e}",
            (m1.unmitigated - ideal).abs(),
            (m1.mitigated - ideal).abs(),
            (m2.mitigated - ideal).abs()
        );
    }
    Ok(())
}
