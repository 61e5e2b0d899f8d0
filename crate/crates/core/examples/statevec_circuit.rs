//! Build a GHZ circuit, inspect its layers and sample bitstrings.

use vqeforge::pauli::parse_hamiltonian;
use vqeforge::statevec::{Circuit, Gate, QuantumState};

fn main() -> vqeforge::Result<()> {
    let n = 4;
    let mut c = Circuit::new(n);
    c.push(Gate::ry(0, std::f64::consts::FRAC_PI_2))?;
    for q in 1..n {
        c.push(Gate::Cnot {
            control: q - 1,
            target: q,
        })?;
    }
    println!("{} gates in {} layers", c.len(), c.depth());

    let mut psi = QuantumState::zero(n)?;
    psi.apply(&c)?;
    let zz = parse_hamiltonian("1 ZZII\n1 IZZI\n1 IIZZ\n")?;
    let xxxx = parse_hamiltonian("1 XXXX\n")?;
    println!(
        "<ΣZZ> = {:.6}, <XXXX> = {:.6}",
        psi.expectation(&zz)?,
        psi.expectation(&xxxx)?
    );

    for (bits, count) in psi.sample_bitstrings(1000, 42)? {
        println!("{bits}: {count}");
    }
    Ok(())
}
