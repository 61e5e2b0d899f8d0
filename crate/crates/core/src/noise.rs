//! Open-system simulation and zero-noise extrapolation.
//!
//! A circuit becomes a piecewise-constant Hamiltonian schedule, which is
//! integrated together with a Lindblad dissipator. Stretching the schedule in
//! time by `c` while dividing the couplings by `c` is equivalent to running at
//! noise rate `cλ`; Richardson extrapolation over several `c` then cancels the
//! leading orders of the noise.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits;
use crate::pauli::{Pauli, PauliString, PauliSum, PauliTerm};
use crate::statevec::{Circuit, Gate, QuantumState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest trace deviation tolerated after a segment.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub hamiltonian: PauliSum,
}

/// Piecewise-constant `H(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSchedule {
    n: usize,
    segments: Vec<Segment>,
}

impl HamiltonianSchedule {
    pub fn new(n: usize, segments: Vec<Segment>) -> Result<Self> {
        for (k, s) in segments.iter().enumerate() {
            if !(s.duration > 0.0 && s.duration.is_finite()) {
                return Err(Error::invalid(
                    "schedule",
                    format!("segment {k} has duration {}", s.duration),
                ));
            }
            if s.hamiltonian.num_qubits() != n {
                return Err(Error::QubitMismatch {
                    expected: n,
                    found: s.hamiltonian.num_qubits(),
                });
            }
            if !s.hamiltonian.is_real(1e-12) {
                return Err(Error::invalid(
                    "schedule",
                    format!("segment {k} Hamiltonian is not Hermitian"),
                ));
            }
        }
        Ok(HamiltonianSchedule { n, segments })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Every duration multiplied by `c`, every coupling divided by `c`.
    pub fn stretched(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::invalid("stretch factor", format!("{c} must be positive")));
        }
        Ok(HamiltonianSchedule {
            n: self.n,
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    duration: s.duration * c,
                    hamiltonian: s.hamiltonian.scale(1.0 / c),
                })
                .collect(),
        })
    }
}

fn generator(gate: &Gate, n: usize) -> Result<PauliSum> {
    let real = |c: f64, s: PauliString| PauliTerm::real(c, s);
    let two = |a: usize, pa: Pauli, b: usize, pb: Pauli| PauliString::from_sparse(n, &[(a, pa), (b, pb)]);
    match gate {
        Gate::Rotation { axis, angle, qubit } => {
            PauliSum::from_terms(n, [real(angle / 2.0, PauliString::single(n, *qubit, axis.pauli()))?])
        }
        Gate::PauliExp { angle, string } => PauliSum::from_terms(n, [real(*angle, string.clone())?]),
        // CZ = exp(−i(π/4)(II − ZI − IZ + ZZ))
        Gate::Cz(a, b) => Ok(PauliSum::from_terms(
            n,
            [
                real(-FRAC_PI_4, PauliString::single(n, *a, Pauli::Z))?,
                real(-FRAC_PI_4, PauliString::single(n, *b, Pauli::Z))?,
                real(FRAC_PI_4, two(*a, Pauli::Z, *b, Pauli::Z))?,
            ],
        )?
        .with_offset(FRAC_PI_4)),
        // CNOT = exp(−i(π/4)(II − ZI − IX + ZX))
        Gate::Cnot { control, target } => Ok(PauliSum::from_terms(
            n,
            [
                real(-FRAC_PI_4, PauliString::single(n, *control, Pauli::Z))?,
                real(-FRAC_PI_4, PauliString::single(n, *target, Pauli::X))?,
                real(FRAC_PI_4, two(*control, Pauli::Z, *target, Pauli::X))?,
            ],
        )?
        .with_offset(FRAC_PI_4)),
        Gate::Unitary2q { .. } => Err(Error::invalid(
            "circuit",
            "a general two-qubit unitary has no Pauli generator decomposition",
        )),
    }
}

/// One segment of length `gate_duration` per circuit layer, with
/// `H = Σ_gates G/τ_g` where `exp(−iG)` is the gate.
pub fn circuit_to_schedule(circuit: &Circuit, gate_duration: f64) -> Result<HamiltonianSchedule> {
    if !(gate_duration > 0.0 && gate_duration.is_finite()) {
        return Err(Error::invalid(
            "gate duration",
            format!("{gate_duration} must be positive"),
        ));
    }
    let n = circuit.num_qubits();
    let mut segments = Vec::with_capacity(circuit.depth());
    for layer in circuit.layers() {
        let mut h = PauliSum::zero(n);
        for gate in layer {
            h = h.add(&generator(gate, n)?)?;
        }
        segments.push(Segment {
            duration: gate_duration,
            hamiltonian: h.scale(1.0 / gate_duration),
        });
    }
    HamiltonianSchedule::new(n, segments)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    /// `L_q = |0⟩⟨1|` on each qubit.
    AmplitudeDamping,
    /// `L_q = Z_q/√2`.
    Dephasing,
    /// `L_q = σ_q/2` for `σ ∈ {X, Y, Z}`.
    Depolarizing,
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "amplitude_damping" | "amplitude" | "damping" => Ok(NoiseKind::AmplitudeDamping),
            "dephasing" => Ok(NoiseKind::Dephasing),
            "depolarizing" => Ok(NoiseKind::Depolarizing),
            other => Err(Error::invalid("noise kind", format!("unknown noise {other:?}"))),
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::AmplitudeDamping => "amplitude_damping",
            NoiseKind::Dephasing => "dephasing",
            NoiseKind::Depolarizing => "depolarizing",
        })
    }
}

impl NoiseKind {
    fn jump_operators(self) -> Vec<Matrix2<Complex64>> {
        let half = Complex64::new(0.5, 0.0);
        match self {
            NoiseKind::AmplitudeDamping => vec![Matrix2::new(ZERO, ONE, ZERO, ZERO)],
            NoiseKind::Dephasing => vec![Pauli::Z.matrix() * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)],
            NoiseKind::Depolarizing => [Pauli::X, Pauli::Y, Pauli::Z]
                .iter()
                .map(|p| p.matrix() * half)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    /// Rate per unit time, shared by all qubits.
    pub rate: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, rate: f64) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::invalid("noise rate", format!("{rate} must be non-negative")));
        }
        Ok(NoiseModel { kind, rate })
    }

    pub fn noiseless() -> Self {
        NoiseModel {
            kind: NoiseKind::AmplitudeDamping,
            rate: 0.0,
        }
    }
}

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    /// Lower bound on steps per segment; the default is 200.
    pub steps_per_segment: usize,
    /// Upper bound on `λ_eff·dt`.
    pub max_rate_step: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            steps_per_segment: 200,
            max_rate_step: 0.1,
        }
    }
}

/// Dense `2ⁿ × 2ⁿ` density matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zero(n: usize) -> Result<Self> {
        Self::from_state(&QuantumState::zero(n)?)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_state(state: &QuantumState) -> Result<Self> {
        let n = state.num_qubits();
        limits::check("density-matrix qubits", n, limits::DENSITY_MAX_QUBITS)?;
        let a = state.amplitudes();
        let data = a.iter().flat_map(|x| a.iter().map(move |y| x * y.conj())).collect();
        Ok(DensityMatrix { n, data })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        DMatrix::from_row_slice(d, d, &self.data)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.to_matrix();
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_with(&self, state: &QuantumState) -> f64 {
        let a = state.amplitudes();
        let d = self.dim();
        let mut acc = ZERO;
        for i in 0..d {
            let row: Complex64 = (0..d).map(|j| self.data[i * d + j] * a[j]).sum();
            acc += a[i].conj() * row;
        }
        acc.re
    }

    /// `tr(ρ O)`.
    pub fn expectation(&self, observable: &PauliSum) -> Result<f64> {
        if observable.num_qubits() != self.n {
            return Err(Error::QubitMismatch {
                expected: self.n,
                found: observable.num_qubits(),
            });
        }
        let d = self.dim();
        let mut total = Complex64::new(observable.offset(), 0.0) * self.trace();
        for term in observable.terms() {
            // tr(ρP) = Σ_x ρ[x, x']·phase(x) with P|x⟩ = phase(x)|x'⟩
            let (flip, mask, ys) = term.string.masks();
            let yphase = Complex64::i().powu(ys);
            let mut acc = ZERO;
            for x in 0..d {
                let sign = if (x & mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                acc += self.data[x * d + (x ^ flip)] * sign;
            }
            total += term.coeff * yphase * acc;
        }
        if total.im.abs() > 1e-9 {
            return Err(Error::Numeric(format!(
                "expectation has imaginary part {:e}; observable is not Hermitian",
                total.im
            )));
        }
        Ok(total.re)
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }
}

fn scale_add(out: &mut [Complex64], x: &[Complex64], k: Complex64) {
    for (o, v) in out.iter_mut().zip(x) {
        *o += k * v;
    }
}

/// `P·ρ` for a Pauli string with masks `(flip, phase mask, y count)`.
fn pauli_left(masks: (usize, usize, u32), rho: &[Complex64], d: usize, out: &mut [Complex64]) {
    let (flip, mask, ys) = masks;
    let yphase = Complex64::i().powu(ys);
    for x in 0..d {
        let s = if (x & mask).count_ones() % 2 == 1 {
            -yphase
        } else {
            yphase
        };
        let (src, dst) = (x * d, (x ^ flip) * d);
        for y in 0..d {
            out[dst + y] = s * rho[src + y];
        }
    }
}

/// `ρ·P`.
fn pauli_right(masks: (usize, usize, u32), rho: &[Complex64], d: usize, out: &mut [Complex64]) {
    let (flip, mask, ys) = masks;
    let yphase = Complex64::i().powu(ys);
    let phases: Vec<Complex64> = (0..d)
        .map(|y| {
            if (y & mask).count_ones() % 2 == 1 {
                -yphase
            } else {
                yphase
            }
        })
        .collect();
    for x in 0..d {
        let row = x * d;
        for y in 0..d {
            out[row + y] = rho[row + (y ^ flip)] * phases[y];
        }
    }
}

/// `m` acting on qubit `bit` from the left.
fn one_left(m: &Matrix2<Complex64>, bit: usize, rho: &[Complex64], d: usize, out: &mut [Complex64]) {
    for i in (0..d).filter(|i| i & bit == 0) {
        let j = i | bit;
        for y in 0..d {
            let (a0, a1) = (rho[i * d + y], rho[j * d + y]);
            out[i * d + y] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            out[j * d + y] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
    }
}

/// `ρ·m` with `m` on qubit `bit`.
fn one_right(m: &Matrix2<Complex64>, bit: usize, rho: &[Complex64], d: usize, out: &mut [Complex64]) {
    for x in 0..d {
        let row = x * d;
        for i in (0..d).filter(|i| i & bit == 0) {
            let j = i | bit;
            let (a0, a1) = (rho[row + i], rho[row + j]);
            out[row + i] = a0 * m[(0, 0)] + a1 * m[(1, 0)];
            out[row + j] = a0 * m[(0, 1)] + a1 * m[(1, 1)];
        }
    }
}

/// `(qubit bit, L, L†, L†L)`
type Jump = (usize, Matrix2<Complex64>, Matrix2<Complex64>, Matrix2<Complex64>);

/// Right-hand side of the master equation for one segment.
struct Generator {
    d: usize,
    terms: Vec<(f64, (usize, usize, u32))>,
    jumps: Vec<Jump>,
    rate: f64,
}

impl Generator {
    fn apply(&self, rho: &[Complex64], out: &mut [Complex64], tmp: &mut [Complex64], tmp2: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = ZERO);
        for &(c, masks) in &self.terms {
            pauli_left(masks, rho, self.d, tmp);
            scale_add(out, tmp, Complex64::new(0.0, -c));
            pauli_right(masks, rho, self.d, tmp);
            scale_add(out, tmp, Complex64::new(0.0, c));
        }
        if self.rate == 0.0 {
            return;
        }
        let r = Complex64::new(self.rate, 0.0);
        let half = Complex64::new(-0.5 * self.rate, 0.0);
        for (bit, l, ldag, ldl) in &self.jumps {
            one_left(l, *bit, rho, self.d, tmp);
            one_right(ldag, *bit, tmp, self.d, tmp2);
            scale_add(out, tmp2, r);
            one_left(ldl, *bit, rho, self.d, tmp);
            scale_add(out, tmp, half);
            one_right(ldl, *bit, rho, self.d, tmp);
            scale_add(out, tmp, half);
        }
    }
}

/// Integrates `dρ/dt = −i[H(t), ρ] + λ_eff Σ_L (LρL† − ½{L†L, ρ})` with
/// `λ_eff = noise.rate · rate_scale`.
pub fn lindblad_evolve(
    rho0: &DensityMatrix,
    schedule: &HamiltonianSchedule,
    noise: &NoiseModel,
    rate_scale: f64,
) -> Result<DensityMatrix> {
    lindblad_evolve_with(rho0, schedule, noise, rate_scale, &Integrator::default())
}

pub fn lindblad_evolve_with(
    rho0: &DensityMatrix,
    schedule: &HamiltonianSchedule,
    noise: &NoiseModel,
    rate_scale: f64,
    integrator: &Integrator,
) -> Result<DensityMatrix> {
    if schedule.num_qubits() != rho0.n {
        return Err(Error::QubitMismatch {
            expected: rho0.n,
            found: schedule.num_qubits(),
        });
    }
    if !(rate_scale >= 0.0 && rate_scale.is_finite()) {
        return Err(Error::invalid(
            "noise scale",
            format!("{rate_scale} must be non-negative"),
        ));
    }
    if integrator.steps_per_segment == 0 || !(integrator.max_rate_step > 0.0) {
        return Err(Error::invalid("integrator", "step bounds must be positive"));
    }
    let d = rho0.dim();
    let rate = noise.rate * rate_scale;
    let jumps: Vec<_> = (0..rho0.n)
        .flat_map(|q| {
            let bit = rho0.bit(q);
            noise.kind.jump_operators().into_iter().map(move |l| {
                let ldag = l.adjoint();
                (bit, l, ldag, ldag * l)
            })
        })
        .collect();

    let mut rho = rho0.data.clone();
    let mut k = [
        vec![ZERO; d * d],
        vec![ZERO; d * d],
        vec![ZERO; d * d],
        vec![ZERO; d * d],
    ];
    let (mut stage, mut tmp, mut tmp2) = (vec![ZERO; d * d], vec![ZERO; d * d], vec![ZERO; d * d]);
    let mut elapsed = 0.0;
    for seg in schedule.segments() {
        let gen = Generator {
            d,
            terms: seg
                .hamiltonian
                .terms()
                .iter()
                .map(|t| (t.coeff.re, t.string.masks()))
                .collect(),
            jumps: jumps.clone(),
            rate,
        };
        let mut dt = seg.duration / integrator.steps_per_segment as f64;
        if rate > 0.0 {
            dt = dt.min(integrator.max_rate_step / rate);
        }
        let steps = (seg.duration / dt).ceil().max(1.0) as usize;
        let h = seg.duration / steps as f64;
        for _ in 0..steps {
            gen.apply(&rho, &mut k[0], &mut tmp, &mut tmp2);
            for (coef, (prev, next)) in [(0.5, (0, 1)), (0.5, (1, 2)), (1.0, (2, 3))] {
                for ((s, r), kv) in stage.iter_mut().zip(&rho).zip(&k[prev]) {
                    *s = r + kv * (h * coef);
                }
                gen.apply(&stage, &mut k[next], &mut tmp, &mut tmp2);
            }
            for (i, r) in rho.iter_mut().enumerate() {
                *r += (k[0][i] + k[1][i] * 2.0 + k[2][i] * 2.0 + k[3][i]) * (h / 6.0);
            }
        }
        elapsed += seg.duration;
        let trace: Complex64 = (0..d).map(|i| rho[i * d + i]).sum();
        if (trace - ONE).norm() > TRACE_DRIFT_LIMIT {
            return Err(Error::Numeric(format!(
                "trace drifted to {trace} at t = {elapsed}; use more integration steps"
            )));
        }
    }
    Ok(DensityMatrix { n: rho0.n, data: rho })
}

/// `tr(ρ(cT) O)` for the schedule stretched by `c` at the physical rate.
pub fn rescaled_expectation(
    rho0: &DensityMatrix,
    schedule: &HamiltonianSchedule,
    noise: &NoiseModel,
    observable: &PauliSum,
    c: f64,
) -> Result<f64> {
    rescaled_expectation_with(rho0, schedule, noise, observable, c, &Integrator::default())
}

pub fn rescaled_expectation_with(
    rho0: &DensityMatrix,
    schedule: &HamiltonianSchedule,
    noise: &NoiseModel,
    observable: &PauliSum,
    c: f64,
    integrator: &Integrator,
) -> Result<f64> {
    if !(c >= 1.0 && c.is_finite()) {
        return Err(Error::invalid("scale factor", format!("{c} must be at least 1")));
    }
    lindblad_evolve_with(rho0, &schedule.stretched(c)?, noise, 1.0, integrator)?.expectation(observable)
}

/// `γ_j = Π_{m≠j} c_m/(c_m − c_j)`, the solution of `Σ γ_j c_j^k = δ_{k0}`
/// for `k = 0…n`.
pub fn richardson_weights(c: &[f64]) -> Result<Vec<f64>> {
    if c.is_empty() {
        return Err(Error::invalid("scale factors", "need at least one"));
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("scale factors", "must be finite"));
    }
    if c[0] < 1.0 {
        return Err(Error::invalid("scale factors", format!("c₀ = {} is below 1", c[0])));
    }
    for w in c.windows(2) {
        if w[1] == w[0] {
            return Err(Error::Numeric(format!(
                "duplicate scale factor {}; system is singular",
                w[0]
            )));
        }
        if w[1] < w[0] {
            return Err(Error::invalid("scale factors", "must be strictly increasing"));
        }
    }
    Ok((0..c.len())
        .map(|j| (0..c.len()).filter(|&m| m != j).map(|m| c[m] / (c[m] - c[j])).product())
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolationPlan {
    scale_factors: Vec<f64>,
    weights: Vec<f64>,
}

impl ExtrapolationPlan {
    pub fn new(scale_factors: Vec<f64>) -> Result<Self> {
        let weights = richardson_weights(&scale_factors)?;
        Ok(ExtrapolationPlan { scale_factors, weights })
    }

    pub fn scale_factors(&self) -> &[f64] {
        &self.scale_factors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of noise orders cancelled.
    pub fn order(&self) -> usize {
        self.scale_factors.len() - 1
    }

    pub fn combine(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(g, v)| g * v).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mitigation {
    pub mitigated: f64,
    /// `(c_j, E(c_j λ))`
    pub raw: Vec<(f64, f64)>,
    /// Value at `c = 1`.
    pub unmitigated: f64,
}

pub fn mitigated_expectation(
    rho0: &DensityMatrix,
    schedule: &HamiltonianSchedule,
    noise: &NoiseModel,
    observable: &PauliSum,
    plan: &ExtrapolationPlan,
) -> Result<Mitigation> {
    mitigated_expectation_with(rho0, schedule, noise, observable, plan, &Integrator::default())
}

pub fn mitigated_expectation_with(
    rho0: &DensityMatrix,
    schedule: &HamiltonianSchedule,
    noise: &NoiseModel,
    observable: &PauliSum,
    plan: &ExtrapolationPlan,
    integrator: &Integrator,
) -> Result<Mitigation> {
    let raw = plan
        .scale_factors
        .iter()
        .map(|&c| {
            Ok((
                c,
                rescaled_expectation_with(rho0, schedule, noise, observable, c, integrator)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let unmitigated = if plan.scale_factors[0] == 1.0 {
        raw[0].1
    } else {
        rescaled_expectation_with(rho0, schedule, noise, observable, 1.0, integrator)?
    };
    let values: Vec<f64> = raw.iter().map(|r| r.1).collect();
    Ok(Mitigation {
        mitigated: plan.combine(&values),
        raw,
        unmitigated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_hamiltonian;

    fn expm_i(h: &PauliSum, t: f64) -> DMatrix<Complex64> {
        let m = h.to_matrix().unwrap() * Complex64::new(0.0, -t);
        m.exp()
    }

    #[test]
    fn pi_pulse_schedule() {
        let mut c = Circuit::new(1);
        c.push(Gate::rx(0, std::f64::consts::PI)).unwrap();
        let s = circuit_to_schedule(&c, 1.0).unwrap();
        assert_eq!(s.segments().len(), 1);
        let want = parse_hamiltonian(&format!("{} X\n", std::f64::consts::FRAC_PI_2)).unwrap();
        assert_eq!(s.segments()[0].hamiltonian, want);
    }

    #[test]
    fn entangler_generators_reproduce_gates() {
        for gate in [
            Gate::Cz(0, 1),
            Gate::Cnot { control: 0, target: 1 },
            Gate::Cnot { control: 1, target: 0 },
        ] {
            let h = generator(&gate, 2).unwrap();
            let u = expm_i(&h, 1.0);
            let want = gate.to_matrix(2);
            assert!((u - want).norm() < 1e-8, "{gate:?}");
        }
    }

    #[test]
    fn general_unitary_rejected() {
        let mut c = Circuit::new(2);
        c.push(Gate::unitary2q(0, 1, nalgebra::Matrix4::identity()).unwrap())
            .unwrap();
        assert!(circuit_to_schedule(&c, 1.0).is_err());
    }

    #[test]
    fn amplitude_damping_closed_form() {
        let lambda = 0.7;
        let rho0 = DensityMatrix::from_state(&QuantumState::basis(1, 1).unwrap()).unwrap();
        let z = parse_hamiltonian("1 Z\n").unwrap();
        let noise = NoiseModel::new(NoiseKind::AmplitudeDamping, lambda).unwrap();
        let mut worst: f64 = 0.0;
        for t in [0.1, 0.5, 1.0, 2.0, 4.0] {
            let s = HamiltonianSchedule::new(
                1,
                vec![Segment {
                    duration: t,
                    hamiltonian: PauliSum::zero(1),
                }],
            )
            .unwrap();
            let rho = lindblad_evolve(&rho0, &s, &noise, 1.0).unwrap();
            let got = rho.expectation(&z).unwrap();
            worst = worst.max((got - (1.0 - 2.0 * (-lambda * t).exp())).abs());
            assert!((rho.trace() - ONE).norm() < 1e-9);
        }
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn dephasing_and_depolarizing_decay() {
        // |+⟩: ⟨X⟩ = e^{−λt} for both channels as normalized here
        let mut plus = QuantumState::zero(1).unwrap();
        plus.apply_gate(&Gate::ry(0, std::f64::consts::FRAC_PI_2)).unwrap();
        let rho0 = DensityMatrix::from_state(&plus).unwrap();
        let x = parse_hamiltonian("1 X\n").unwrap();
        let s = HamiltonianSchedule::new(
            1,
            vec![Segment {
                duration: 1.5,
                hamiltonian: PauliSum::zero(1),
            }],
        )
        .unwrap();
        for kind in [NoiseKind::Dephasing, NoiseKind::Depolarizing] {
            let rho = lindblad_evolve(&rho0, &s, &NoiseModel::new(kind, 0.4).unwrap(), 1.0).unwrap();
            assert!(
                (rho.expectation(&x).unwrap() - (-0.4f64 * 1.5).exp()).abs() < 1e-8,
                "{kind}"
            );
            assert!(rho.min_eigenvalue() > -1e-8);
        }
    }

    #[test]
    fn noiseless_evolution_matches_statevec() {
        let mut c = Circuit::new(2);
        c.extend([
            Gate::ry(0, 0.7),
            Gate::rx(1, -1.2),
            Gate::Cz(0, 1),
            Gate::rz(0, 0.4),
            Gate::Cnot { control: 1, target: 0 },
            Gate::PauliExp {
                angle: 0.3,
                string: "XY".parse().unwrap(),
            },
        ])
        .unwrap();
        let s = circuit_to_schedule(&c, 1.0).unwrap();
        let rho = lindblad_evolve(&DensityMatrix::zero(2).unwrap(), &s, &NoiseModel::noiseless(), 1.0).unwrap();
        let mut psi = QuantumState::zero(2).unwrap();
        psi.apply(&c).unwrap();
        assert!(rho.fidelity_with(&psi) > 1.0 - 1e-8);
        assert!(rho.hermiticity_error() < 1e-9);
    }

    #[test]
    fn richardson_examples() {
        assert_eq!(richardson_weights(&[1.0]).unwrap(), vec![1.0]);
        assert_eq!(richardson_weights(&[1.0, 2.0]).unwrap(), vec![2.0, -1.0]);
        let w = richardson_weights(&[1.0, 2.0, 3.0]).unwrap();
        for (a, b) in w.iter().zip([3.0, -3.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(richardson_weights(&[1.0, 1.0]), Err(Error::Numeric(_))));
        assert!(richardson_weights(&[2.0, 1.0]).is_err());
        assert!(richardson_weights(&[0.5, 1.0]).is_err());
    }

    #[test]
    fn rescaled_equals_direct_rate_scaling() {
        let mut c = Circuit::new(2);
        c.extend([Gate::ry(0, 1.1), Gate::Cz(0, 1), Gate::rx(1, 0.6)]).unwrap();
        let s = circuit_to_schedule(&c, 1.0).unwrap();
        let noise = NoiseModel::new(NoiseKind::AmplitudeDamping, 0.01).unwrap();
        let obs = parse_hamiltonian("1 ZZ\n0.5 XI\n").unwrap();
        let rho0 = DensityMatrix::zero(2).unwrap();
        let stretched = rescaled_expectation(&rho0, &s, &noise, &obs, 2.0).unwrap();
        let direct = lindblad_evolve(&rho0, &s, &noise, 2.0)
            .unwrap()
            .expectation(&obs)
            .unwrap();
        assert!((stretched - direct).abs() < 1e-8);
        assert!(rescaled_expectation(&rho0, &s, &noise, &obs, 0.5).is_err());
    }
}
