//! Energy estimation: exact expectation values or finite-shot sampling of
//! qubit-wise commuting measurement groups.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum};
use crate::rng;
use crate::statevec::{rotation_matrix, Axis, QuantumState};

/// Largest coefficient imaginary part accepted in shot mode.
const REAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimationMode {
    Exact,
    /// `shots` measurements per commuting group; group `g` draws from
    /// stream `g` of `seed`.
    Shots {
        shots: u64,
        seed: u64,
    },
}

impl EstimationMode {
    pub fn is_exact(&self) -> bool {
        matches!(self, EstimationMode::Exact)
    }

    /// Same shot budget with a different seed; exact mode is unchanged.
    pub fn reseeded(self, seed: u64) -> Self {
        match self {
            EstimationMode::Exact => EstimationMode::Exact,
            EstimationMode::Shots { shots, .. } => EstimationMode::Shots { shots, seed },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub value: f64,
    /// Zero in exact mode.
    pub std_error: f64,
    /// Zero in exact mode.
    pub shots_per_group: u64,
}

impl EnergyEstimate {
    pub fn exact(value: f64) -> Self {
        EnergyEstimate {
            value,
            std_error: 0.0,
            shots_per_group: 0,
        }
    }
}

pub fn exact_expectation(state: &QuantumState, h: &PauliSum) -> Result<f64> {
    state.expectation(h)
}

pub fn estimate(state: &QuantumState, h: &PauliSum, mode: EstimationMode) -> Result<EnergyEstimate> {
    if h.num_qubits() != state.num_qubits() {
        return Err(Error::QubitMismatch {
            expected: state.num_qubits(),
            found: h.num_qubits(),
        });
    }
    match mode {
        EstimationMode::Exact => Ok(EnergyEstimate::exact(state.expectation(h)?)),
        EstimationMode::Shots { shots, seed } => sample_estimate(state, h, shots, seed),
    }
}

/// Pre-rotation that maps the eigenbasis of `p` onto the computational basis.
fn basis_change(p: Pauli) -> Option<(Axis, f64)> {
    match p {
        Pauli::X => Some((Axis::Y, -FRAC_PI_2)),
        Pauli::Y => Some((Axis::X, FRAC_PI_2)),
        Pauli::I | Pauli::Z => None,
    }
}

fn sample_estimate(state: &QuantumState, h: &PauliSum, shots: u64, seed: u64) -> Result<EnergyEstimate> {
    if shots == 0 {
        return Err(Error::invalid("shots", "must be at least 1"));
    }
    if !h.is_real(REAL_TOLERANCE) {
        return Err(Error::invalid(
            "observable",
            format!(
                "shot estimation needs real coefficients; max imaginary part {:e}",
                h.max_imag()
            ),
        ));
    }
    let n = state.num_qubits();
    let mut value = h.offset();
    let mut variance = 0.0;
    for (g, group) in h.group_commuting().iter().enumerate() {
        let mut rotated = state.clone();
        for (q, &p) in group.basis().iter().enumerate() {
            if let Some((axis, angle)) = basis_change(p) {
                rotated.apply_1q(q, &rotation_matrix(axis, angle));
            }
        }
        // each term's eigenvalue is the parity of the measured bits on its support
        let terms: Vec<(f64, usize)> = group
            .terms()
            .iter()
            .map(|t| {
                let mask = t.string.support().fold(0usize, |m, (q, _)| m | 1 << (n - 1 - q));
                (t.coeff.re, mask)
            })
            .collect();
        let mut rng = rng::stream(seed, g as u64);
        let samples: Vec<f64> = rotated
            .sample_indices(shots, &mut rng)
            .into_iter()
            .map(|idx| {
                terms
                    .iter()
                    .map(|&(c, mask)| if (idx & mask).count_ones() % 2 == 0 { c } else { -c })
                    .sum()
            })
            .collect();
        let s = shots as f64;
        let mean = samples.iter().sum::<f64>() / s;
        value += mean;
        if shots > 1 {
            let var = samples.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (s - 1.0);
            variance += var / s;
        }
    }
    Ok(EnergyEstimate {
        value,
        std_error: variance.sqrt(),
        shots_per_group: shots,
    })
}
