//! Trial-state circuits: hardware-efficient heuristic layers and Trotterized
//! unitary coupled cluster (singles and doubles).

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fermion::{jordan_wigner, FermionOperator, LadderOp};
use crate::statevec::{Circuit, Gate};

/// Single-qubit rotations used in each heuristic layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationScheme {
    /// Euler `Z·X·Z` per qubit; the first layer drops the innermost `Z`
    /// since it only adds a phase to `|0⟩`. Angles `N(3D+2)`.
    ZxzFull,
    /// `Y(θ₀)·Z(θ₁)` per qubit, `Z` applied first. Angles `2N(D+1)`.
    Yz,
    /// `Y(θ)` per qubit; real amplitudes only. Angles `N(D+1)`.
    YOnly,
}

impl RotationScheme {
    fn angles_per_qubit(self, layer: usize) -> usize {
        match (self, layer) {
            (RotationScheme::ZxzFull, 0) => 2,
            (RotationScheme::ZxzFull, _) => 3,
            (RotationScheme::Yz, _) => 2,
            (RotationScheme::YOnly, _) => 1,
        }
    }

    /// Gates for one qubit, in application order.
    fn gates(self, layer: usize, qubit: usize, angles: &[f64]) -> Vec<Gate> {
        match (self, layer) {
            (RotationScheme::ZxzFull, 0) => vec![Gate::rx(qubit, angles[0]), Gate::rz(qubit, angles[1])],
            (RotationScheme::ZxzFull, _) => vec![
                Gate::rz(qubit, angles[0]),
                Gate::rx(qubit, angles[1]),
                Gate::rz(qubit, angles[2]),
            ],
            (RotationScheme::Yz, _) => vec![Gate::rz(qubit, angles[1]), Gate::ry(qubit, angles[0])],
            (RotationScheme::YOnly, _) => vec![Gate::ry(qubit, angles[0])],
        }
    }
}

impl std::str::FromStr for RotationScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zxz" | "zxz-full" | "zxz_full" => Ok(RotationScheme::ZxzFull),
            "yz" => Ok(RotationScheme::Yz),
            "y" | "y-only" | "y_only" => Ok(RotationScheme::YOnly),
            other => Err(Error::invalid("rotation scheme", format!("unknown scheme {other:?}"))),
        }
    }
}

/// Fixed entangling block `U_ent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Entangler {
    #[default]
    CzLinearChain,
    CzAllPairs,
    CnotLinearChain,
}

impl Entangler {
    fn gates(self, n: usize) -> Vec<Gate> {
        match self {
            Entangler::CzLinearChain => (1..n).map(|q| Gate::Cz(q - 1, q)).collect(),
            Entangler::CzAllPairs => (0..n).flat_map(|a| (a + 1..n).map(move |b| Gate::Cz(a, b))).collect(),
            Entangler::CnotLinearChain => (1..n)
                .map(|q| Gate::Cnot {
                    control: q - 1,
                    target: q,
                })
                .collect(),
        }
    }
}

impl std::str::FromStr for Entangler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cz" | "cz-chain" | "cz_linear_chain" => Ok(Entangler::CzLinearChain),
            "cz-all" | "cz_all_pairs" => Ok(Entangler::CzAllPairs),
            "cnot" | "cnot-chain" | "cnot_linear_chain" => Ok(Entangler::CnotLinearChain),
            other => Err(Error::invalid("entangler", format!("unknown entangler {other:?}"))),
        }
    }
}

/// `U^D · U_ent · … · U^1 · U_ent · U^0` applied to `|0…0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeuristicAnsatzSpec {
    pub n: usize,
    pub depth: usize,
    pub rotation: RotationScheme,
    pub entangler: Entangler,
}

impl HeuristicAnsatzSpec {
    pub fn new(n: usize, depth: usize, rotation: RotationScheme) -> Self {
        HeuristicAnsatzSpec {
            n,
            depth,
            rotation,
            entangler: Entangler::default(),
        }
    }

    pub fn with_entangler(mut self, entangler: Entangler) -> Self {
        self.entangler = entangler;
        self
    }

    pub fn parameter_count(&self) -> usize {
        (0..=self.depth)
            .map(|layer| self.n * self.rotation.angles_per_qubit(layer))
            .sum()
    }

    /// Parameters are ordered by layer, then qubit, then application order
    /// within the qubit's rotations.
    pub fn circuit(&self, theta: &[f64]) -> Result<Circuit> {
        if self.n == 0 {
            return Err(Error::invalid("ansatz", "needs at least one qubit"));
        }
        check_len(theta.len(), self.parameter_count())?;
        let mut circuit = Circuit::new(self.n);
        let mut rest = theta;
        for layer in 0..=self.depth {
            if layer > 0 {
                circuit.extend(self.entangler.gates(self.n))?;
            }
            let k = self.rotation.angles_per_qubit(layer);
            for q in 0..self.n {
                let (angles, tail) = rest.split_at(k);
                circuit.extend(self.rotation.gates(layer, q, angles))?;
                rest = tail;
            }
        }
        Ok(circuit)
    }

    /// Maps parameters of this depth onto depth `D+1` by prepending an
    /// all-zero rotation layer. Both entanglers leave `|0…0⟩` unchanged, so
    /// the prepared state is identical.
    pub fn embed_into_next_depth(&self, theta: &[f64]) -> Result<Vec<f64>> {
        check_len(theta.len(), self.parameter_count())?;
        let mut out = vec![0.0; self.n * self.rotation.angles_per_qubit(0)];
        let first = self.n * self.rotation.angles_per_qubit(0);
        let (layer0, rest) = theta.split_at(first);
        match self.rotation {
            // old first layer (X, Z) becomes a full (Z, X, Z) layer
            RotationScheme::ZxzFull => {
                for q in 0..self.n {
                    out.extend_from_slice(&[0.0, layer0[2 * q], layer0[2 * q + 1]]);
                }
            }
            _ => out.extend_from_slice(layer0),
        }
        out.extend_from_slice(rest);
        Ok(out)
    }
}

pub fn heuristic_circuit(spec: &HeuristicAnsatzSpec, theta: &[f64]) -> Result<Circuit> {
    spec.circuit(theta)
}

fn check_len(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::invalid(
            "parameter vector",
            format!("expected {want} angles, got {got}"),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Excitation {
    /// `a†_to a_from`
    Single { from: usize, to: usize },
    /// `a†_l a†_k a_j a_i` with `from = (i, j)`, `to = (k, l)`.
    Double { from: (usize, usize), to: (usize, usize) },
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Excitation::Single { from, to } => write!(f, "{from}->{to}"),
            Excitation::Double { from, to } => write!(f, "{},{}->{},{}", from.0, from.1, to.0, to.1),
        }
    }
}

/// Unitary coupled cluster truncated at doubles, first-order Trotterized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UccsdSpec {
    n_modes: usize,
    occupied: Vec<usize>,
    unoccupied: Vec<usize>,
    trotter_steps: usize,
}

impl UccsdSpec {
    pub fn new(
        n_modes: usize,
        mut occupied: Vec<usize>,
        mut unoccupied: Vec<usize>,
        trotter_steps: usize,
    ) -> Result<Self> {
        occupied.sort_unstable();
        occupied.dedup();
        unoccupied.sort_unstable();
        unoccupied.dedup();
        if n_modes == 0 {
            return Err(Error::invalid("uccsd", "needs at least one mode"));
        }
        if let Some(m) = occupied.iter().chain(&unoccupied).find(|&&m| m >= n_modes) {
            return Err(Error::invalid("uccsd", format!("mode {m} out of range")));
        }
        if let Some(m) = occupied.iter().find(|m| unoccupied.contains(m)) {
            return Err(Error::invalid(
                "uccsd",
                format!("mode {m} is both occupied and unoccupied"),
            ));
        }
        if trotter_steps == 0 {
            return Err(Error::invalid("trotter steps", "must be at least 1"));
        }
        Ok(UccsdSpec {
            n_modes,
            occupied,
            unoccupied,
            trotter_steps,
        })
    }

    /// Lowest `n_electrons` modes occupied, the rest unoccupied.
    pub fn closed_shell(n_modes: usize, n_electrons: usize, trotter_steps: usize) -> Result<Self> {
        Self::new(
            n_modes,
            (0..n_electrons).collect(),
            (n_electrons..n_modes).collect(),
            trotter_steps,
        )
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn occupied(&self) -> &[usize] {
        &self.occupied
    }

    pub fn unoccupied(&self) -> &[usize] {
        &self.unoccupied
    }

    pub fn trotter_steps(&self) -> usize {
        self.trotter_steps
    }

    pub fn with_trotter_steps(mut self, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::invalid("trotter steps", "must be at least 1"));
        }
        self.trotter_steps = steps;
        Ok(self)
    }

    /// Singles `(i∈occ, j∈unocc)` first, then doubles with `i<j`, `k<l`.
    pub fn excitations(&self) -> Vec<Excitation> {
        let mut out = Vec::new();
        for &from in &self.occupied {
            for &to in &self.unoccupied {
                out.push(Excitation::Single { from, to });
            }
        }
        for (a, &i) in self.occupied.iter().enumerate() {
            for &j in &self.occupied[a + 1..] {
                for (b, &k) in self.unoccupied.iter().enumerate() {
                    for &l in &self.unoccupied[b + 1..] {
                        out.push(Excitation::Double {
                            from: (i, j),
                            to: (k, l),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn parameter_count(&self) -> usize {
        let (o, u) = (self.occupied.len(), self.unoccupied.len());
        o * u + (o * o.saturating_sub(1) / 2) * (u * u.saturating_sub(1) / 2)
    }

    /// `T(θ) − T†(θ)`.
    pub fn generator(&self, theta: &[f64]) -> Result<FermionOperator> {
        check_len(theta.len(), self.parameter_count())?;
        let mut t = FermionOperator::zero(self.n_modes);
        for (ex, &angle) in self.excitations().iter().zip(theta) {
            if angle == 0.0 {
                continue;
            }
            let ops = match *ex {
                Excitation::Single { from, to } => vec![LadderOp::create(to), LadderOp::annihilate(from)],
                Excitation::Double {
                    from: (i, j),
                    to: (k, l),
                } => vec![
                    LadderOp::create(l),
                    LadderOp::create(k),
                    LadderOp::annihilate(j),
                    LadderOp::annihilate(i),
                ],
            };
            t.push(Complex64::new(angle, 0.0), ops)?;
        }
        t.add(&t.adjoint().scale(Complex64::new(-1.0, 0.0)))
    }

    /// Reference determinant with the occupied modes filled.
    pub fn hartree_fock_reference(&self) -> Vec<bool> {
        (0..self.n_modes).map(|m| self.occupied.contains(&m)).collect()
    }

    /// X gates preparing `reference`, then `trotter_steps` repetitions of
    /// `exp(c_α P_α / steps)` over the mapped generator terms in canonical
    /// order.
    pub fn circuit(&self, theta: &[f64], reference: &[bool]) -> Result<Circuit> {
        if reference.len() != self.n_modes {
            return Err(Error::invalid(
                "reference",
                format!("length {} does not match {} modes", reference.len(), self.n_modes),
            ));
        }
        let ones = reference.iter().filter(|b| **b).count();
        if ones != self.occupied.len() {
            return Err(Error::invalid(
                "reference",
                format!("has {ones} occupied modes, expected {}", self.occupied.len()),
            ));
        }
        let mapped = jordan_wigner(&self.generator(theta)?);
        let steps = self.trotter_steps as f64;
        let mut factors = Vec::with_capacity(mapped.len());
        for term in mapped.terms() {
            if term.coeff.re.abs() > 1e-12 {
                return Err(Error::Numeric(format!(
                    "generator term {} has real part {:e}; expected anti-Hermitian",
                    term.string, term.coeff.re
                )));
            }
            if term.string.is_identity() {
                continue;
            }
            // exp(i·a·P/steps) = exp(−iθP) with θ = −a/steps
            factors.push(Gate::PauliExp {
                angle: -term.coeff.im / steps,
                string: term.string.clone(),
            });
        }
        let mut circuit = Circuit::new(self.n_modes);
        for (m, _) in reference.iter().enumerate().filter(|(_, b)| **b) {
            circuit.push(Gate::rx(m, std::f64::consts::PI))?;
        }
        for _ in 0..self.trotter_steps {
            circuit.extend(factors.iter().cloned())?;
        }
        Ok(circuit)
    }
}

pub fn uccsd_generator(spec: &UccsdSpec, theta: &[f64]) -> Result<FermionOperator> {
    spec.generator(theta)
}

pub fn uccsd_circuit(spec: &UccsdSpec, theta: &[f64], reference: &[bool]) -> Result<Circuit> {
    spec.circuit(theta, reference)
}
