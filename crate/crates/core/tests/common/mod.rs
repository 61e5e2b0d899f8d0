//! Independent dense oracles and generators shared by the integration tests.
//!
//! Nothing here calls the library's own matrix builders: gates and ladder
//! operators are assembled from explicit 2×2 blocks and Kronecker products.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vqeforge::fermion::{FermionOperator, LadderOp};
use vqeforge::pauli::{Pauli, PauliString, PauliSum, PauliTerm};
use vqeforge::statevec::{Axis, Circuit, Gate};

pub type M = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_2x2(p: Pauli) -> M {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        Pauli::I => M::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => M::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => M::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => M::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// `⊗_q ops[q]` with qubit 0 as the leftmost factor.
pub fn kron_all(ops: &[M]) -> M {
    ops.iter().skip(1).fold(ops[0].clone(), |acc, m| acc.kronecker(m))
}

pub fn embed_1q(n: usize, q: usize, m: &M) -> M {
    let ops: Vec<M> = (0..n)
        .map(|k| if k == q { m.clone() } else { M::identity(2, 2) })
        .collect();
    kron_all(&ops)
}

pub fn string_matrix(s: &PauliString) -> M {
    let ops: Vec<M> = s.ops().iter().map(|&p| pauli_2x2(p)).collect();
    kron_all(&ops)
}

pub fn sum_matrix(h: &PauliSum) -> M {
    let dim = 1 << h.num_qubits();
    let mut m = M::identity(dim, dim) * c(h.offset(), 0.0);
    for t in h.terms() {
        m += string_matrix(&t.string) * t.coeff;
    }
    m
}

/// `exp(−iθσ/2) = cos(θ/2) I − i sin(θ/2) σ`.
pub fn rotation_2x2(axis: Axis, theta: f64) -> M {
    let p = match axis {
        Axis::X => Pauli::X,
        Axis::Y => Pauli::Y,
        Axis::Z => Pauli::Z,
    };
    M::identity(2, 2) * c((theta / 2.0).cos(), 0.0) - pauli_2x2(p) * c(0.0, (theta / 2.0).sin())
}

fn projector(bit: usize) -> M {
    let mut m = M::zeros(2, 2);
    m[(bit, bit)] = c(1.0, 0.0);
    m
}

fn controlled(n: usize, control: usize, target: usize, u: &M) -> M {
    let ops0: Vec<M> = (0..n)
        .map(|k| if k == control { projector(0) } else { M::identity(2, 2) })
        .collect();
    let ops1: Vec<M> = (0..n)
        .map(|k| match k {
            _ if k == control => projector(1),
            _ if k == target => u.clone(),
            _ => M::identity(2, 2),
        })
        .collect();
    kron_all(&ops0) + kron_all(&ops1)
}

pub fn gate_oracle(gate: &Gate, n: usize) -> M {
    match gate {
        Gate::Rotation { axis, angle, qubit } => embed_1q(n, *qubit, &rotation_2x2(*axis, *angle)),
        Gate::Cz(a, b) => controlled(n, *a, *b, &pauli_2x2(Pauli::Z)),
        Gate::Cnot { control, target } => controlled(n, *control, *target, &pauli_2x2(Pauli::X)),
        Gate::PauliExp { angle, string } => {
            let dim = 1 << n;
            M::identity(dim, dim) * c(angle.cos(), 0.0) - string_matrix(string) * c(0.0, angle.sin())
        }
        Gate::Unitary2q { .. } => panic!("oracle does not cover arbitrary two-qubit unitaries"),
    }
}

/// Column 0 of the product of gate oracles, i.e. `U|0…0⟩`.
pub fn circuit_oracle_state(circuit: &Circuit) -> Vec<Complex64> {
    let n = circuit.num_qubits();
    let dim = 1 << n;
    let mut v = M::zeros(dim, 1);
    v[(0, 0)] = c(1.0, 0.0);
    for g in circuit.gates() {
        v = gate_oracle(g, n) * v;
    }
    v.column(0).iter().copied().collect()
}

pub fn random_gate(n: usize, r: &mut ChaCha8Rng) -> Gate {
    let q = r.random_range(0..n);
    let mut other = r.random_range(0..n - 1);
    if other >= q {
        other += 1;
    }
    let angle = r.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    match r.random_range(0..6) {
        0 => Gate::rx(q, angle),
        1 => Gate::ry(q, angle),
        2 => Gate::rz(q, angle),
        3 => Gate::Cz(q, other),
        4 => Gate::Cnot {
            control: q,
            target: other,
        },
        _ => Gate::PauliExp {
            angle,
            string: PauliString::new((0..n).map(|_| Pauli::ALL[r.random_range(0..4)]).collect()).unwrap(),
        },
    }
}

pub fn random_circuit(n: usize, gates: usize, seed: u64) -> Circuit {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut circuit = Circuit::new(n);
    for _ in 0..gates {
        circuit.push(random_gate(n, &mut r)).unwrap();
    }
    circuit
}

/// Occupation-basis annihilator: `a_i|…1_i…⟩ = (−1)^{Σ_{k<i} n_k} |…0_i…⟩`,
/// mode `i` stored in bit `n−1−i` of the basis index.
pub fn annihilator_oracle(n: usize, i: usize) -> M {
    let dim = 1 << n;
    let mut m = M::zeros(dim, dim);
    for idx in 0..dim {
        let bit = 1 << (n - 1 - i);
        if idx & bit == 0 {
            continue;
        }
        let below = (0..i).filter(|&k| idx & (1 << (n - 1 - k)) != 0).count();
        let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
        m[(idx ^ bit, idx)] = c(sign, 0.0);
    }
    m
}

pub fn fermion_oracle(op: &FermionOperator) -> M {
    let n = op.n_modes();
    let dim = 1 << n;
    let mut total = M::zeros(dim, dim);
    for (coeff, ops) in op.products() {
        let mut m = M::identity(dim, dim);
        for l in ops {
            let a = annihilator_oracle(n, l.mode);
            let factor = if *l == LadderOp::create(l.mode) { a.adjoint() } else { a };
            m *= factor;
        }
        total += m * *coeff;
    }
    total
}

pub fn max_abs_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn arb_pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

pub fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(arb_pauli(), n).prop_map(|ops| PauliString::new(ops).unwrap())
}

pub fn arb_term(n: usize) -> impl Strategy<Value = PauliTerm> {
    (arb_string(n), -2.0f64..2.0, -2.0f64..2.0).prop_map(|(s, re, im)| PauliTerm::new(c(re, im), s).unwrap())
}

pub fn arb_real_sum(n: usize, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((arb_string(n), -1.5f64..1.5), 1..=max_terms).prop_map(move |ts| {
        PauliSum::from_terms(n, ts.into_iter().map(|(s, w)| PauliTerm::real(w, s).unwrap())).unwrap()
    })
}

/// Random Hermitian operator built as `X + X†` from random ladder products.
pub fn random_hermitian_fermion(n: usize, products: usize, seed: u64) -> FermionOperator {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut op = FermionOperator::zero(n);
    for _ in 0..products {
        let len = r.random_range(1..=4);
        let ops = (0..len)
            .map(|_| {
                let mode = r.random_range(0..n);
                if r.random_bool(0.5) {
                    LadderOp::create(mode)
                } else {
                    LadderOp::annihilate(mode)
                }
            })
            .collect();
        op.push(c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)), ops)
            .unwrap();
    }
    op.add(&op.adjoint()).unwrap()
}
