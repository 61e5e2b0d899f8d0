//! Parse a Hamiltonian, multiply Pauli strings and group terms for measurement.

use vqeforge::pauli::{parse_hamiltonian, PauliString};

fn main() -> vqeforge::Result<()> {
    let h = parse_hamiltonian(
        "# transverse-field Ising chain\n\
         -1.0 ZZI\n-1.0 IZZ\n-0.5 XII\n-0.5 IXI\n-0.5 IIX\n0.2 XXI\n",
    )?;
    println!(
        "{} terms on {} qubits, diagonal: {}",
        h.len(),
        h.num_qubits(),
        h.is_diagonal()
    );

    let a: PauliString = "XYZ".parse()?;
    let b: PauliString = "ZYX".parse()?;
    let (phase, p) = a.mul(&b)?;
    println!("{a} · {b} = ({phase}) {p}; commute: {}", a.commutes(&b));

    for (k, g) in h.group_commuting().iter().enumerate() {
        let basis: String = g.basis().iter().map(|p| p.as_char()).collect();
        let terms: Vec<String> = g.terms().iter().map(|t| t.string.to_string()).collect();
        println!("group {k}: measure in {basis} -> {}", terms.join(", "));
    }

    let square = h.mul(&h)?;
    let trace: f64 = square
        .terms()
        .iter()
        .filter(|t| t.string.is_identity())
        .map(|t| t.coeff.re)
        .sum::<f64>()
        + square.offset();
    println!("H² has {} terms; tr(H²)/2ⁿ = {trace:.4}", square.len());
    Ok(())
}
