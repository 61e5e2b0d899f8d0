//! Quick oracle-equivalence checks runnable from the command line.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng as _;

use crate::fermion::{fermion_matrix, jordan_wigner, FermionOperator, LadderOp};
use crate::noise::richardson_weights;
use crate::pauli::{Pauli, PauliString};
use crate::rng;
use crate::statevec::{Axis, Circuit, Gate, QuantumState};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst deviation observed.
    pub deviation: f64,
    pub tolerance: f64,
}

fn check(name: &'static str, deviation: f64, tolerance: f64) -> Check {
    Check {
        name,
        passed: deviation <= tolerance,
        deviation,
        tolerance,
    }
}

fn random_pauli(r: &mut rng::Rng) -> Pauli {
    Pauli::ALL[r.random_range(0..4)]
}

/// A random gate from the full gate set on `n ≥ 2` qubits.
pub fn random_gate(n: usize, r: &mut rng::Rng) -> Gate {
    let q = r.random_range(0..n);
    let mut other = r.random_range(0..n - 1);
    if other >= q {
        other += 1;
    }
    let angle = r.random_range(-PI..PI);
    match r.random_range(0..5) {
        0 => Gate::Rotation {
            axis: [Axis::X, Axis::Y, Axis::Z][r.random_range(0..3)],
            angle,
            qubit: q,
        },
        1 => Gate::Cz(q, other),
        2 => Gate::Cnot {
            control: q,
            target: other,
        },
        _ => Gate::PauliExp {
            angle,
            string: PauliString::new((0..n).map(|_| random_pauli(r)).collect()).expect("n ≥ 1"),
        },
    }
}

fn circuit_oracle(cases: usize, seed: u64) -> Check {
    let mut r = rng::seeded(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let n = r.random_range(2..=4);
        let mut c = Circuit::new(n);
        for _ in 0..30 {
            c.push(random_gate(n, &mut r)).expect("valid gate");
        }
        let mut st = QuantumState::zero(n).expect("small n");
        st.apply(&c).expect("valid circuit");
        let u = c.to_matrix().expect("small n");
        for (i, a) in st.amplitudes().iter().enumerate() {
            worst = worst.max((a - u[(i, 0)]).norm());
        }
    }
    check("statevec vs dense circuit matrix", worst, 1e-9)
}

fn pauli_product_oracle(cases: usize, seed: u64) -> Check {
    let mut r = rng::stream(seed, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let n = r.random_range(1..=4);
        let a = PauliString::new((0..n).map(|_| random_pauli(&mut r)).collect()).expect("n ≥ 1");
        let b = PauliString::new((0..n).map(|_| random_pauli(&mut r)).collect()).expect("n ≥ 1");
        let (phase, p) = a.mul(&b).expect("same length");
        let dense = a.to_matrix() * b.to_matrix();
        worst = worst.max((dense - p.to_matrix() * phase).norm());
    }
    check("Pauli products vs dense matrices", worst, 1e-12)
}

fn anticommutator_oracle(max_modes: usize) -> Check {
    let mut worst: f64 = 0.0;
    for n in 1..=max_modes {
        let id = DMatrix::<Complex64>::identity(1 << n, 1 << n);
        for i in 0..n {
            for j in 0..n {
                let a = FermionOperator::ladder(n, LadderOp::annihilate(i)).expect("mode in range");
                let b = FermionOperator::ladder(n, LadderOp::create(j)).expect("mode in range");
                let m = jordan_wigner(&a.anticommutator(&b).expect("same modes"))
                    .to_matrix()
                    .expect("small n");
                let want = if i == j {
                    id.clone()
                } else {
                    id.clone() * Complex64::new(0.0, 0.0)
                };
                worst = worst.max((m - want).norm());
                let direct = fermion_matrix(&a.mul(&b).expect("same modes")).expect("small n");
                let mapped = jordan_wigner(&a.mul(&b).expect("same modes"))
                    .to_matrix()
                    .expect("small n");
                worst = worst.max((direct - mapped).norm());
            }
        }
    }
    check("Jordan-Wigner anticommutators and occupation oracle", worst, 1e-10)
}

fn richardson_moments() -> Check {
    let mut worst: f64 = 0.0;
    for c in [&[1.0, 2.0][..], &[1.0, 2.0, 3.0], &[1.0, 1.5, 2.0, 3.0]] {
        let g = richardson_weights(c).expect("valid factors");
        for k in 0..c.len() {
            let m: f64 = g.iter().zip(c).map(|(g, c)| g * c.powi(k as i32)).sum();
            worst = worst.max((m - if k == 0 { 1.0 } else { 0.0 }).abs());
        }
    }
    check("Richardson weight moment conditions", worst, 1e-10)
}

pub fn run_selftest(seed: u64) -> Vec<Check> {
    vec![
        circuit_oracle(200, seed),
        pauli_product_oracle(500, seed),
        anticommutator_oracle(4),
        richardson_moments(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_selftest(5) {
            assert!(c.passed, "{c:?}");
        }
    }
}
