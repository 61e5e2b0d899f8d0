//! Dense state-vector simulation.
//!
//! Qubit 0 is the most significant bit of an amplitude index. Rotations act as
//! `exp(−iθσ/2)`; Pauli exponentials act as `exp(−iθP)` with the full angle,
//! since they represent Trotter factors.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::limits;
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::rng;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance on `|‖ψ‖ − 1|` and on the imaginary part of expectation values.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }
}

/// `exp(−iθσ/2)` about `axis`.
pub fn rotation_matrix(axis: Axis, angle: f64) -> Matrix2<Complex64> {
    let (s, c) = (angle / 2.0).sin_cos();
    let c = Complex64::new(c, 0.0);
    match axis {
        Axis::X => {
            let mis = Complex64::new(0.0, -s);
            Matrix2::new(c, mis, mis, c)
        }
        Axis::Y => {
            let s = Complex64::new(s, 0.0);
            Matrix2::new(c, -s, s, c)
        }
        Axis::Z => Matrix2::new(
            Complex64::from_polar(1.0, -angle / 2.0),
            ZERO,
            ZERO,
            Complex64::from_polar(1.0, angle / 2.0),
        ),
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Gate {
    Rotation {
        axis: Axis,
        angle: f64,
        qubit: usize,
    },
    Cz(usize, usize),
    Cnot {
        control: usize,
        target: usize,
    },
    /// `exp(−iθP)`; only the string of `P` matters.
    PauliExp {
        angle: f64,
        string: PauliString,
    },
    /// Arbitrary two-qubit unitary; `q1` is the more significant local bit.
    Unitary2q {
        q1: usize,
        q2: usize,
        matrix: Matrix4<Complex64>,
    },
}

impl Gate {
    pub fn rx(qubit: usize, angle: f64) -> Gate {
        Gate::Rotation {
            axis: Axis::X,
            angle,
            qubit,
        }
    }

    pub fn ry(qubit: usize, angle: f64) -> Gate {
        Gate::Rotation {
            axis: Axis::Y,
            angle,
            qubit,
        }
    }

    pub fn rz(qubit: usize, angle: f64) -> Gate {
        Gate::Rotation {
            axis: Axis::Z,
            angle,
            qubit,
        }
    }

    /// Checked constructor for [`Gate::Unitary2q`].
    pub fn unitary2q(q1: usize, q2: usize, matrix: Matrix4<Complex64>) -> Result<Gate> {
        let dev = (matrix.adjoint() * matrix - Matrix4::identity()).norm();
        if dev > NORM_TOLERANCE {
            return Err(Error::invalid(
                "two-qubit gate",
                format!("matrix is not unitary (deviation {dev:e})"),
            ));
        }
        Ok(Gate::Unitary2q { q1, q2, matrix })
    }

    /// Qubits the gate acts on non-trivially.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Rotation { qubit, .. } => vec![*qubit],
            Gate::Cz(a, b) => vec![*a, *b],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::PauliExp { string, .. } => string.support().map(|(q, _)| q).collect(),
            Gate::Unitary2q { q1, q2, .. } => vec![*q1, *q2],
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Rotation { axis, angle, qubit } => Gate::Rotation {
                axis: *axis,
                angle: -angle,
                qubit: *qubit,
            },
            Gate::PauliExp { angle, string } => Gate::PauliExp {
                angle: -angle,
                string: string.clone(),
            },
            Gate::Unitary2q { q1, q2, matrix } => Gate::Unitary2q {
                q1: *q1,
                q2: *q2,
                matrix: matrix.adjoint(),
            },
            g @ (Gate::Cz(..) | Gate::Cnot { .. }) => g.clone(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if let Gate::PauliExp { string, .. } = self {
            if string.num_qubits() != n {
                return Err(Error::QubitMismatch {
                    expected: n,
                    found: string.num_qubits(),
                });
            }
        }
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= n {
                return Err(Error::invalid(
                    "gate",
                    format!("qubit index {q} out of range for {n} qubits"),
                ));
            }
            if qs[..i].contains(&q) {
                return Err(Error::invalid("gate", format!("qubit {q} used twice")));
            }
        }
        Ok(())
    }

    /// Dense `2^n × 2^n` matrix built from Kronecker products.
    pub fn to_matrix(&self, n: usize) -> DMatrix<Complex64> {
        let embed = |factors: &[(usize, Pauli)]| PauliString::from_sparse(n, factors).to_matrix();
        let dim = 1usize << n;
        match self {
            Gate::Rotation { axis, angle, qubit } => {
                // exp(−iθσ/2) = cos(θ/2)·I − i·sin(θ/2)·σ
                let (s, c) = (angle / 2.0).sin_cos();
                DMatrix::identity(dim, dim) * Complex64::new(c, 0.0)
                    + embed(&[(*qubit, axis.pauli())]) * Complex64::new(0.0, -s)
            }
            Gate::PauliExp { angle, string } => {
                let (s, c) = angle.sin_cos();
                DMatrix::identity(dim, dim) * Complex64::new(c, 0.0) + string.to_matrix() * Complex64::new(0.0, -s)
            }
            // CZ = (I + Z_a + Z_b − Z_a Z_b)/2
            Gate::Cz(a, b) => {
                (DMatrix::identity(dim, dim) + embed(&[(*a, Pauli::Z)]) + embed(&[(*b, Pauli::Z)])
                    - embed(&[(*a, Pauli::Z), (*b, Pauli::Z)]))
                    * Complex64::new(0.5, 0.0)
            }
            // CNOT = (I + Z_c + X_t − Z_c X_t)/2
            Gate::Cnot { control, target } => {
                (DMatrix::identity(dim, dim) + embed(&[(*control, Pauli::Z)]) + embed(&[(*target, Pauli::X)])
                    - embed(&[(*control, Pauli::Z), (*target, Pauli::X)]))
                    * Complex64::new(0.5, 0.0)
            }
            // Expand in the two-qubit Pauli basis: M = Σ tr((P⊗Q)† M)/4 · P⊗Q.
            Gate::Unitary2q { q1, q2, matrix } => {
                let mut m = DMatrix::zeros(dim, dim);
                for p in Pauli::ALL {
                    for q in Pauli::ALL {
                        let pq = p.matrix().kronecker(&q.matrix());
                        let coeff = (pq.adjoint() * matrix).trace() / 4.0;
                        if coeff.norm() > 0.0 {
                            m += embed(&[(*q1, p), (*q2, q)]) * coeff;
                        }
                    }
                }
                m
            }
        }
    }
}

/// Ordered gate list with an as-soon-as-possible partition into layers of
/// gates on pairwise disjoint qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    layers: Vec<Vec<usize>>,
    frontier: Vec<usize>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit {
            n,
            gates: Vec::new(),
            layers: Vec::new(),
            frontier: vec![0; n],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n)?;
        let qs = gate.qubits();
        let layer = if qs.is_empty() {
            self.layers.len().saturating_sub(1)
        } else {
            qs.iter().map(|&q| self.frontier[q]).max().unwrap_or(0)
        };
        if layer == self.layers.len() {
            self.layers.push(Vec::new());
        }
        self.layers[layer].push(self.gates.len());
        for q in qs {
            self.frontier[q] = layer + 1;
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<&mut Self> {
        for g in gates {
            self.push(g)?;
        }
        Ok(self)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Gates grouped by layer.
    pub fn layers(&self) -> impl Iterator<Item = Vec<&Gate>> + '_ {
        self.layers
            .iter()
            .map(|idx| idx.iter().map(|&i| &self.gates[i]).collect())
    }

    pub fn inverse(&self) -> Circuit {
        let mut inv = Circuit::new(self.n);
        for g in self.gates.iter().rev() {
            inv.push(g.inverse()).expect("inverse of a valid gate is valid");
        }
        inv
    }

    /// Dense unitary of the whole circuit (oracle use only).
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        limits::check(
            "qubit count",
            self.n,
            limits::oracle_limit(limits::PAULI_ORACLE_DEFAULT),
        )?;
        let dim = 1usize << self.n;
        let mut u = DMatrix::identity(dim, dim);
        for g in &self.gates {
            u = g.to_matrix(self.n) * u;
        }
        Ok(u)
    }
}

/// Outcome counts keyed by bitstring (qubit 0 leftmost).
pub type Histogram = BTreeMap<String, u64>;

pub fn bitstring(n: usize, index: usize) -> String {
    (0..n)
        .map(|q| if index >> (n - 1 - q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("qubit count", "must be at least 1"));
        }
        limits::check("qubit count", n, limits::STATEVEC_MAX_QUBITS)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::invalid("basis index", format!("{index} out of range")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(QuantumState { n, amps })
    }

    /// Wraps an amplitude vector whose length is a power of two and whose
    /// norm is one.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(
                "state",
                format!("length {dim} is not a power of two ≥ 2"),
            ));
        }
        let n = dim.trailing_zeros() as usize;
        limits::check("qubit count", n, limits::STATEVEC_MAX_QUBITS)?;
        let s = QuantumState { n, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::invalid("state", format!("norm {norm} is not 1")));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &QuantumState) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    fn bit(&self, q: usize) -> usize {
        1usize << (self.n - 1 - q)
    }

    pub fn apply(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.n {
            return Err(Error::QubitMismatch {
                expected: self.n,
                found: circuit.num_qubits(),
            });
        }
        for g in circuit.gates() {
            self.apply_gate_unchecked(g);
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n)?;
        self.apply_gate_unchecked(gate);
        Ok(())
    }

    fn apply_gate_unchecked(&mut self, gate: &Gate) {
        match gate {
            Gate::Rotation { axis, angle, qubit } => self.apply_1q(*qubit, &rotation_matrix(*axis, *angle)),
            Gate::Cz(a, b) => {
                let mask = self.bit(*a) | self.bit(*b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (self.bit(*control), self.bit(*target));
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            Gate::PauliExp { angle, string } => self.apply_pauli_exp(*angle, string),
            Gate::Unitary2q { q1, q2, matrix } => self.apply_2q(*q1, *q2, matrix),
        }
    }

    pub(crate) fn apply_1q(&mut self, q: usize, m: &Matrix2<Complex64>) {
        let bit = self.bit(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let j = i | bit;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
                self.amps[j] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
            }
        }
    }

    fn apply_2q(&mut self, q1: usize, q2: usize, m: &Matrix4<Complex64>) {
        let (b1, b2) = (self.bit(q1), self.bit(q2));
        for i in 0..self.amps.len() {
            if i & (b1 | b2) == 0 {
                let idx = [i, i | b2, i | b1, i | b1 | b2];
                let v = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] = (0..4).map(|c| m[(r, c)] * v[c]).sum();
                }
            }
        }
    }

    /// `P|ψ⟩` for a bare Pauli string.
    fn pauli_image(&self, string: &PauliString) -> Vec<Complex64> {
        let (flip, phase, ys) = string.masks();
        let yphase = Complex64::i().powu(ys);
        let mut out = vec![ZERO; self.amps.len()];
        for (x, a) in self.amps.iter().enumerate() {
            let sign = if (x & phase).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[x ^ flip] = yphase * sign * a;
        }
        out
    }

    fn apply_pauli_exp(&mut self, angle: f64, string: &PauliString) {
        let (s, c) = angle.sin_cos();
        let image = self.pauli_image(string);
        let mis = Complex64::new(0.0, -s);
        for (a, p) in self.amps.iter_mut().zip(image) {
            *a = *a * c + mis * p;
        }
    }

    /// `⟨ψ|P|ψ⟩` for a bare Pauli string.
    pub fn expectation_string(&self, string: &PauliString) -> Complex64 {
        self.amps
            .iter()
            .zip(self.pauli_image(string))
            .map(|(a, p)| a.conj() * p)
            .sum()
    }

    /// `Σ h_α ⟨ψ|P_α|ψ⟩ + offset`; errors when the result is not real.
    pub fn expectation(&self, h: &PauliSum) -> Result<f64> {
        if h.num_qubits() != self.n {
            return Err(Error::QubitMismatch {
                expected: self.n,
                found: h.num_qubits(),
            });
        }
        let value: Complex64 = h
            .terms()
            .iter()
            .map(|t| t.coeff * self.expectation_string(&t.string))
            .sum();
        if value.im.abs() > NORM_TOLERANCE {
            return Err(Error::Numeric(format!(
                "expectation value has imaginary part {:e}; observable is not Hermitian",
                value.im
            )));
        }
        Ok(value.re + h.offset())
    }

    /// Draws `shots` basis-state indices from `|amplitude|²`.
    pub(crate) fn sample_indices(&self, shots: u64, rng: &mut rng::Rng) -> Vec<usize> {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let last = self.amps.len() - 1;
        (0..shots)
            .map(|_| {
                let u: f64 = rng.random::<f64>() * total;
                cdf.partition_point(|&c| c <= u).min(last)
            })
            .collect()
    }

    /// Histogram of `shots` i.i.d. computational-basis measurements.
    pub fn sample_bitstrings(&self, shots: u64, seed: u64) -> Result<Histogram> {
        if shots == 0 {
            return Err(Error::invalid("shots", "must be at least 1"));
        }
        let mut rng = rng::seeded(seed);
        let mut hist = Histogram::new();
        for idx in self.sample_indices(shots, &mut rng) {
            *hist.entry(bitstring(self.n, idx)).or_insert(0) += 1;
        }
        Ok(hist)
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > 1e-12 {
                writeln!(f, "|{}⟩ {:+.6}{:+.6}i", bitstring(self.n, i), a.re, a.im)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn zero_state_shapes() {
        assert_eq!(QuantumState::zero(1).unwrap().amplitudes(), &[ONE, ZERO]);
        let s2 = QuantumState::zero(2).unwrap();
        assert_eq!(s2.amplitudes(), &[ONE, ZERO, ZERO, ZERO]);
        assert!((QuantumState::zero(3).unwrap().norm() - 1.0).abs() < 1e-15);
        assert!(QuantumState::zero(0).is_err());
        assert!(QuantumState::zero(21).is_err());
    }

    #[test]
    fn pi_pulse_flips() {
        let mut s = QuantumState::zero(1).unwrap();
        s.apply_gate(&Gate::rx(0, PI)).unwrap();
        assert!(close(s.amplitudes()[1], Complex64::new(0.0, -1.0)));
        assert!(s.amplitudes()[0].norm() < 1e-15);
    }

    #[test]
    fn cz_phases_only_11() {
        let mut s = QuantumState::zero(2).unwrap();
        s.apply_gate(&Gate::ry(0, PI / 2.0)).unwrap();
        s.apply_gate(&Gate::ry(1, PI / 2.0)).unwrap();
        s.apply_gate(&Gate::Cz(0, 1)).unwrap();
        let a = s.amplitudes();
        for (i, want) in [0.5, 0.5, 0.5, -0.5].iter().enumerate() {
            assert!(close(a[i], Complex64::new(*want, 0.0)), "{i}: {}", a[i]);
        }
    }

    #[test]
    fn zz_exponential_phase_on_01() {
        let theta = 0.37;
        let mut s = QuantumState::basis(2, 0b01).unwrap();
        s.apply_gate(&Gate::PauliExp {
            angle: theta,
            string: "ZZ".parse().unwrap(),
        })
        .unwrap();
        assert!(close(s.amplitudes()[1], Complex64::from_polar(1.0, theta)));
    }

    #[test]
    fn cnot_targets_lsb_of_pair() {
        let mut s = QuantumState::basis(2, 0b10).unwrap();
        s.apply_gate(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        assert!(close(s.amplitudes()[0b11], ONE));
    }

    #[test]
    fn invalid_gates_rejected() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::Cz(0, 0)).is_err());
        assert!(c.push(Gate::rx(2, 1.0)).is_err());
        assert!(c
            .push(Gate::PauliExp {
                angle: 1.0,
                string: "ZZZ".parse().unwrap()
            })
            .is_err());
        let bad = Matrix4::from_element(Complex64::new(0.5, 0.0));
        assert!(Gate::unitary2q(0, 1, bad).is_err());
        let mut s = QuantumState::zero(3).unwrap();
        assert!(s.apply(&Circuit::new(2)).is_err());
    }

    #[test]
    fn layers_are_disjoint() {
        let mut c = Circuit::new(3);
        c.extend([
            Gate::rx(0, 0.1),
            Gate::rx(1, 0.2),
            Gate::Cz(0, 1),
            Gate::rx(2, 0.3),
            Gate::Cnot { control: 1, target: 2 },
        ])
        .unwrap();
        let layers: Vec<_> = c.layers().collect();
        assert_eq!(layers.len(), 3);
        assert_eq!(layers[0].len(), 3);
        for layer in &layers {
            let mut seen = Vec::new();
            for g in layer {
                for q in g.qubits() {
                    assert!(!seen.contains(&q));
                    seen.push(q);
                }
            }
        }
    }

    #[test]
    fn identity_expectation() {
        let mut s = QuantumState::zero(2).unwrap();
        s.apply_gate(&Gate::ry(0, 0.7)).unwrap();
        s.apply_gate(&Gate::rx(1, 1.3)).unwrap();
        let h = PauliSum::zero(2).with_offset(3.25);
        assert!((s.expectation(&h).unwrap() - 3.25).abs() < 1e-12);
    }

    #[test]
    fn h2_expectation_on_00() {
        let s = QuantumState::zero(2).unwrap();
        let e = s.expectation(&crate::fermion::h2_hamiltonian()).unwrap();
        // f0 + f1 + f2 + f3; XX vanishes on |00⟩.
        assert!((e - (-0.24532)).abs() < 1e-12, "{e}");
    }

    #[test]
    fn deterministic_sampling() {
        let s = QuantumState::basis(2, 0b11).unwrap();
        let h = s.sample_bitstrings(100, 1).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h["11"], 100);
        assert!(s.sample_bitstrings(0, 1).is_err());
    }

    #[test]
    fn bell_sampling_statistics_and_seed_stability() {
        let r = FRAC_1_SQRT_2;
        let bell =
            QuantumState::from_amplitudes(vec![Complex64::new(r, 0.0), ZERO, ZERO, Complex64::new(r, 0.0)]).unwrap();
        let shots = 100_000u64;
        let h = bell.sample_bitstrings(shots, 42).unwrap();
        let sigma = (shots as f64 * 0.25).sqrt();
        assert_eq!(h.len(), 2);
        assert!((h["00"] as f64 - 50_000.0).abs() < 5.0 * sigma);
        assert!((h["11"] as f64 - 50_000.0).abs() < 5.0 * sigma);
        assert_eq!(h.values().sum::<u64>(), shots);
        assert_eq!(h, bell.sample_bitstrings(shots, 42).unwrap());
    }

    #[test]
    fn bitstring_is_msb_first() {
        assert_eq!(bitstring(3, 0b100), "100");
        assert_eq!(bitstring(3, 0b001), "001");
    }
}
