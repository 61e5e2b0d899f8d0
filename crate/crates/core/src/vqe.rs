//! The hybrid loop: prepare `|Ψ(θ)⟩`, estimate `⟨H⟩`, let the optimizer pick
//! the next θ.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use rand::Rng as _;

use crate::ansatz::{HeuristicAnsatzSpec, UccsdSpec};
use crate::error::{Error, Result};
use crate::estimator::{estimate, EnergyEstimate, EstimationMode};
use crate::optimize::{minimize, OptimizationTrace, Optimizer, OptimizerConfig};
use crate::pauli::{load_hamiltonian, PauliSum};
use crate::rng;
use crate::statevec::{Circuit, QuantumState};

#[derive(Debug, Clone, PartialEq)]
pub enum AnsatzChoice {
    Heuristic(HeuristicAnsatzSpec),
    Uccsd { spec: UccsdSpec, reference: Vec<bool> },
}

impl AnsatzChoice {
    /// UCCSD from the Hartree-Fock determinant of `spec`.
    pub fn uccsd(spec: UccsdSpec) -> Self {
        let reference = spec.hartree_fock_reference();
        AnsatzChoice::Uccsd { spec, reference }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            AnsatzChoice::Heuristic(h) => h.n,
            AnsatzChoice::Uccsd { spec, .. } => spec.n_modes(),
        }
    }

    pub fn parameter_count(&self) -> usize {
        match self {
            AnsatzChoice::Heuristic(h) => h.parameter_count(),
            AnsatzChoice::Uccsd { spec, .. } => spec.parameter_count(),
        }
    }

    pub fn circuit(&self, theta: &[f64]) -> Result<Circuit> {
        match self {
            AnsatzChoice::Heuristic(h) => h.circuit(theta),
            AnsatzChoice::Uccsd { spec, reference } => spec.circuit(theta, reference),
        }
    }

    pub fn prepare(&self, theta: &[f64]) -> Result<QuantumState> {
        let mut state = QuantumState::zero(self.num_qubits())?;
        state.apply(&self.circuit(theta)?)?;
        Ok(state)
    }

    fn describe(&self) -> String {
        match self {
            AnsatzChoice::Heuristic(h) => format!(
                "heuristic rotation={:?} entangler={:?} depth={}",
                h.rotation, h.entangler, h.depth
            ),
            AnsatzChoice::Uccsd { spec, .. } => format!(
                "uccsd occupied={:?} unoccupied={:?} trotter_steps={}",
                spec.occupied(),
                spec.unoccupied(),
                spec.trotter_steps()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeProblem {
    pub hamiltonian: PauliSum,
    pub ansatz: AnsatzChoice,
    pub mode: EstimationMode,
    pub optimizer: Optimizer,
    pub config: OptimizerConfig,
}

impl VqeProblem {
    pub fn new(hamiltonian: PauliSum, ansatz: AnsatzChoice) -> Result<Self> {
        if ansatz.num_qubits() != hamiltonian.num_qubits() {
            return Err(Error::QubitMismatch {
                expected: hamiltonian.num_qubits(),
                found: ansatz.num_qubits(),
            });
        }
        Ok(VqeProblem {
            hamiltonian,
            ansatz,
            mode: EstimationMode::Exact,
            optimizer: Optimizer::Spsa,
            config: OptimizerConfig::default(),
        })
    }

    pub fn with_mode(mut self, mode: EstimationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_optimizer(mut self, optimizer: Optimizer, config: OptimizerConfig) -> Self {
        self.optimizer = optimizer;
        self.config = config;
        self
    }

    /// `⟨Ψ(θ)|H|Ψ(θ)⟩` under `mode`.
    pub fn energy(&self, theta: &[f64], mode: EstimationMode) -> Result<EnergyEstimate> {
        estimate(&self.ansatz.prepare(theta)?, &self.hamiltonian, mode)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialPoint {
    Given(Vec<f64>),
    /// Uniform in `[−0.1, 0.1]` per angle.
    Random {
        seed: u64,
    },
}

impl InitialPoint {
    pub fn resolve(&self, count: usize) -> Result<Vec<f64>> {
        match self {
            InitialPoint::Given(theta) if theta.len() == count => Ok(theta.clone()),
            InitialPoint::Given(theta) => Err(Error::invalid(
                "initial parameters",
                format!("expected {count} angles, got {}", theta.len()),
            )),
            InitialPoint::Random { seed } => {
                let mut rng = rng::stream(*seed, 1);
                Ok((0..count).map(|_| rng.random_range(-0.1..=0.1)).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeResult {
    pub trace: OptimizationTrace,
    /// Final energy under the problem's estimation mode.
    pub estimate: EnergyEstimate,
    /// Exact `⟨H⟩` of the final state, free of shot noise.
    pub noiseless_energy: f64,
    pub theta: Vec<f64>,
    pub state: QuantumState,
}

/// Seed of the `k`-th shot-mode evaluation, so repeated evaluations see
/// independent noise.
fn evaluation_seed(seed: u64, k: u64) -> u64 {
    seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn run_vqe(problem: &VqeProblem, init: &InitialPoint) -> Result<VqeResult> {
    let theta0 = init.resolve(problem.ansatz.parameter_count())?;
    let mut calls = 0u64;
    let trace = minimize(
        problem.optimizer,
        |theta: &[f64]| {
            let mode = match problem.mode {
                EstimationMode::Shots { seed, .. } => problem.mode.reseeded(evaluation_seed(seed, calls)),
                EstimationMode::Exact => EstimationMode::Exact,
            };
            calls += 1;
            problem.energy(theta, mode)
        },
        &theta0,
        &problem.config,
    )?;
    let theta = trace.best_theta.clone();
    let state = problem.ansatz.prepare(&theta)?;
    let noiseless_energy = state.expectation(&problem.hamiltonian)?;
    let estimate = match problem.mode {
        EstimationMode::Exact => EnergyEstimate::exact(noiseless_energy),
        EstimationMode::Shots { seed, .. } => {
            let mode = problem.mode.reseeded(evaluation_seed(seed, u64::MAX));
            crate::estimator::estimate(&state, &problem.hamiltonian, mode)?
        }
    };
    Ok(VqeResult {
        trace,
        estimate,
        noiseless_energy,
        theta,
        state,
    })
}

/// Lowest eigenvalue of the dense matrix of `h`.
pub fn exact_ground_energy(h: &PauliSum) -> Result<f64> {
    let m: DMatrix<_> = h.to_matrix()?;
    m.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .reduce(f64::min)
        .ok_or_else(|| Error::Numeric("empty Hamiltonian matrix".into()))
}

/// `key=value` lines describing a finished run.
pub fn format_results(problem: &VqeProblem, result: &VqeResult, seed: u64, trace_file: Option<&Path>) -> String {
    let mut s = String::new();
    let mode = match problem.mode {
        EstimationMode::Exact => "exact".to_string(),
        EstimationMode::Shots { shots, .. } => format!("shots:{shots}"),
    };
    let theta: Vec<String> = result.theta.iter().map(|t| format!("{t:.12}")).collect();
    let _ = writeln!(s, "qubits={}", problem.hamiltonian.num_qubits());
    let _ = writeln!(s, "terms={}", problem.hamiltonian.len());
    let _ = writeln!(s, "ansatz={}", problem.ansatz.describe());
    let _ = writeln!(s, "parameters={}", result.theta.len());
    let _ = writeln!(s, "optimizer={:?}", problem.optimizer);
    let _ = writeln!(s, "max_iterations={}", problem.config.max_iterations);
    let _ = writeln!(s, "mode={mode}");
    let _ = writeln!(s, "seed={seed}");
    if let Some(p) = trace_file {
        let _ = writeln!(s, "trace={}", p.display());
    }
    let _ = writeln!(s, "evaluations={}", result.trace.evaluations());
    let _ = writeln!(s, "energy={:.12}", result.estimate.value);
    let _ = writeln!(s, "energy_std_error={:.3e}", result.estimate.std_error);
    let _ = writeln!(s, "energy_noiseless={:.12}", result.noiseless_energy);
    let _ = writeln!(s, "theta={}", theta.join(","));
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub distance: f64,
    pub file: PathBuf,
    pub ground_energy: f64,
    pub vqe_energy: f64,
    pub std_error: f64,
}

/// Last decimal number in a file stem, e.g. `h2_0.735.ham` → 0.735.
pub fn distance_from_filename(path: &Path) -> Option<f64> {
    let stem = path.file_stem()?.to_str()?;
    stem.split(|c: char| !(c.is_ascii_digit() || c == '.'))
        .filter_map(|tok| tok.trim_matches('.').parse::<f64>().ok())
        .next_back()
}

/// Runs `template`'s ansatz, mode and optimizer on every `*.ham` file in
/// `dir`, sorted by the bond distance encoded in the filename.
pub fn dissociation_curve(dir: &Path, template: &VqeProblem, init: &InitialPoint) -> Result<Vec<CurvePoint>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "ham") {
            let d = distance_from_filename(&path)
                .ok_or_else(|| Error::invalid("curve file", format!("no bond distance in name {}", path.display())))?;
            files.push((d, path));
        }
    }
    if files.is_empty() {
        return Err(Error::invalid(
            "curve directory",
            format!("no .ham files in {}", dir.display()),
        ));
    }
    files.sort_by(|a, b| a.0.total_cmp(&b.0));
    files
        .into_iter()
        .map(|(distance, file)| {
            let h = load_hamiltonian(&file)?;
            let problem = VqeProblem {
                hamiltonian: h,
                ..template.clone()
            };
            if problem.ansatz.num_qubits() != problem.hamiltonian.num_qubits() {
                return Err(Error::QubitMismatch {
                    expected: problem.hamiltonian.num_qubits(),
                    found: problem.ansatz.num_qubits(),
                });
            }
            let result = run_vqe(&problem, init)?;
            Ok(CurvePoint {
                distance,
                ground_energy: exact_ground_energy(&problem.hamiltonian)?,
                vqe_energy: result.estimate.value,
                std_error: result.estimate.std_error,
                file,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::RotationScheme;
    use crate::fermion::h2_hamiltonian;
    use crate::pauli::parse_hamiltonian;

    #[test]
    fn single_flip_reaches_minus_one() {
        let h = parse_hamiltonian("1.0 ZI\n").unwrap();
        let ansatz = AnsatzChoice::Heuristic(HeuristicAnsatzSpec::new(2, 0, RotationScheme::YOnly));
        let config = OptimizerConfig {
            max_iterations: 400,
            ..Default::default()
        };
        let p = VqeProblem::new(h, ansatz)
            .unwrap()
            .with_optimizer(Optimizer::NelderMead, config);
        let r = run_vqe(&p, &InitialPoint::Random { seed: 3 }).unwrap();
        assert!((r.noiseless_energy + 1.0).abs() < 1e-6, "{}", r.noiseless_energy);
    }

    #[test]
    fn ground_energy_of_h2() {
        let e0 = exact_ground_energy(&h2_hamiltonian()).unwrap();
        assert!((e0 + 1.8572219850484373).abs() < 1e-12);
    }

    #[test]
    fn mismatched_ansatz_rejected() {
        let ansatz = AnsatzChoice::Heuristic(HeuristicAnsatzSpec::new(3, 1, RotationScheme::Yz));
        assert!(VqeProblem::new(h2_hamiltonian(), ansatz).is_err());
    }

    #[test]
    fn random_init_is_small_and_seeded() {
        let a = InitialPoint::Random { seed: 11 }.resolve(8).unwrap();
        assert!(a.iter().all(|t| t.abs() <= 0.1));
        assert_eq!(a, InitialPoint::Random { seed: 11 }.resolve(8).unwrap());
        assert!(InitialPoint::Given(vec![0.0]).resolve(2).is_err());
    }

    #[test]
    fn distances_from_names() {
        assert_eq!(distance_from_filename(Path::new("h2_0.735.ham")), Some(0.735));
        assert_eq!(distance_from_filename(Path::new("dir/r1.5.ham")), Some(1.5));
        assert_eq!(distance_from_filename(Path::new("eq.ham")), None);
    }

    #[test]
    fn results_file_lists_energies() {
        let ansatz = AnsatzChoice::Heuristic(HeuristicAnsatzSpec::new(2, 1, RotationScheme::Yz));
        let config = OptimizerConfig {
            max_iterations: 5,
            ..Default::default()
        };
        let p = VqeProblem::new(h2_hamiltonian(), ansatz)
            .unwrap()
            .with_optimizer(Optimizer::Spsa, config);
        let r = run_vqe(&p, &InitialPoint::Random { seed: 0 }).unwrap();
        let text = format_results(&p, &r, 0, None);
        assert!(text.contains("energy_noiseless="));
        assert!(text.contains("seed=0"));
    }
}
