//! Map fermionic operators to qubits and check them against the occupation basis.

use vqeforge::fermion::{
    build_molecular_hamiltonian, fermion_matrix, jordan_wigner, FermionOperator, LadderOp, MolecularCoefficients,
};

fn main() -> vqeforge::Result<()> {
    let n = 3;
    for i in 0..n {
        let a = FermionOperator::ladder(n, LadderOp::annihilate(i))?;
        println!("a_{i} -> {}", jordan_wigner(&a).to_string().trim().replace('\n', " + "));
    }

    let a0 = FermionOperator::ladder(n, LadderOp::annihilate(0))?;
    let c2 = FermionOperator::ladder(n, LadderOp::create(2))?;
    let anti = jordan_wigner(&a0.anticommutator(&c2)?);
    println!(
        "{{a_0, a†_2}} maps to {} terms (zero operator: {})",
        anti.len(),
        anti.is_empty()
    );

    // Three-site tight-binding ring with one on-site repulsion.
    let mut coeffs = MolecularCoefficients::zeros(n);
    for i in 0..n {
        let j = (i + 1) % n;
        coeffs.set_t(i, j, -1.0);
        coeffs.set_t(j, i, -1.0);
    }
    coeffs.set_u(0, 0, 1, 1, 0.5);
    let h = build_molecular_hamiltonian(&coeffs);
    let qubit_h = jordan_wigner(&h);
    let dev = (qubit_h.to_matrix()? - fermion_matrix(&h)?).norm();
    println!("{} qubit terms; ‖JW(H) − H_occupation‖ = {dev:.2e}", qubit_h.len());
    println!("max imaginary coefficient: {:.1e}", qubit_h.max_imag());
    Ok(())
}
