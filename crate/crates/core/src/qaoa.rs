//! MaxCut as an Ising ground-state problem: encoding, brute-force oracle,
//! QAOA circuits and the variational solver.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::ansatz::HeuristicAnsatzSpec;
use crate::error::{Error, Result};
use crate::estimator::{estimate, EstimationMode};
use crate::optimize::{minimize, OptimizationTrace, Optimizer, OptimizerConfig};
use crate::pauli::{Pauli, PauliString, PauliSum, PauliTerm};
use crate::statevec::{bitstring, Circuit, Gate, Histogram, QuantumState};
use crate::vqe::InitialPoint;

pub const BRUTE_FORCE_MAX_NODES: usize = 24;

/// Undirected graph with positive edge weights; edges are stored with `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n_nodes: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(n_nodes: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut graph = WeightedGraph {
            n_nodes,
            edges: Vec::new(),
        };
        let mut seen = BTreeSet::new();
        for (a, b, w) in edges {
            graph.push_edge(&mut seen, a, b, w)?;
        }
        Ok(graph)
    }

    fn push_edge(&mut self, seen: &mut BTreeSet<(usize, usize)>, a: usize, b: usize, w: f64) -> Result<()> {
        if a == b {
            return Err(Error::invalid("graph", format!("self-loop on node {a}")));
        }
        let (i, j) = (a.min(b), a.max(b));
        if j >= self.n_nodes {
            return Err(Error::invalid(
                "graph",
                format!("edge ({a}, {b}) out of range for {} nodes", self.n_nodes),
            ));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::invalid(
                "graph",
                format!("edge ({a}, {b}) weight {w} is not positive"),
            ));
        }
        if !seen.insert((i, j)) {
            return Err(Error::invalid("graph", format!("duplicate edge ({i}, {j})")));
        }
        self.edges.push((i, j, w));
        Ok(())
    }

    /// Four nodes, five unit-weight edges: a square `0-1-3-2-0` with the
    /// diagonal `1-2`.
    pub fn diamond() -> Self {
        Self::new(4, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)]).expect("valid built-in graph")
    }

    pub fn complete(n: usize, weight: f64) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, weight))))
    }

    pub fn cycle(n: usize, weight: f64) -> Result<Self> {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n, weight)))
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Weight of edges crossing the partition; bit `i` of the string is node `i`.
    pub fn cut_value(&self, bits: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|(i, j, _)| bits[*i] != bits[*j])
            .map(|e| e.2)
            .sum()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
    }
}

impl FromStr for WeightedGraph {
    type Err = Error;

    /// Lines `<i> <j> <w>`; node count is the largest index plus one.
    fn from_str(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::syntax(k + 1, format!("expected `i j w`, got {line:?}")));
            }
            let node = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::syntax(k + 1, format!("bad node index {s:?}")))
            };
            let (i, j) = (node(fields[0])?, node(fields[1])?);
            let w: f64 = fields[2]
                .parse()
                .map_err(|_| Error::syntax(k + 1, format!("bad weight {:?}", fields[2])))?;
            n = n.max(i + 1).max(j + 1);
            edges.push((k + 1, i, j, w));
        }
        let mut graph = WeightedGraph::new(n, [])?;
        let mut seen = BTreeSet::new();
        for (line, i, j, w) in edges {
            graph
                .push_edge(&mut seen, i, j, w)
                .map_err(|e| Error::syntax(line, e.to_string()))?;
        }
        Ok(graph)
    }
}

/// `H_C = Σ w_ij Z_i Z_j`; a partition with cut `C` has energy `Σw − 2C`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxCutEncoding {
    pub hamiltonian: PauliSum,
    pub total_weight: f64,
}

impl MaxCutEncoding {
    pub fn cut_from_energy(&self, energy: f64) -> f64 {
        (self.total_weight - energy) / 2.0
    }
}

pub fn encode_maxcut(graph: &WeightedGraph) -> Result<MaxCutEncoding> {
    if graph.n_nodes == 0 {
        return Err(Error::invalid("graph", "needs at least one node"));
    }
    let n = graph.n_nodes;
    let terms = graph
        .edges
        .iter()
        .map(|&(i, j, w)| PauliTerm::real(w, PauliString::from_sparse(n, &[(i, Pauli::Z), (j, Pauli::Z)])))
        .collect::<Result<Vec<_>>>()?;
    Ok(MaxCutEncoding {
        hamiltonian: PauliSum::from_terms(n, terms)?,
        total_weight: graph.total_weight(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxCutOptimum {
    pub value: f64,
    /// Basis-state indices (node 0 = most significant bit).
    pub optimal: Vec<usize>,
}

impl MaxCutOptimum {
    pub fn bitstrings(&self, n: usize) -> Vec<String> {
        self.optimal.iter().map(|&i| bitstring(n, i)).collect()
    }
}

/// Exhaustive search over all `2ⁿ` partitions; ties within `1e-9` are all
/// reported.
pub fn brute_force_maxcut(graph: &WeightedGraph) -> Result<MaxCutOptimum> {
    let n = graph.n_nodes;
    crate::limits::check("brute-force nodes", n, BRUTE_FORCE_MAX_NODES)?;
    let masks: Vec<(usize, f64)> = graph
        .edges
        .iter()
        .map(|&(i, j, w)| ((1 << (n - 1 - i)) | (1 << (n - 1 - j)), w))
        .collect();
    let mut best = f64::NEG_INFINITY;
    let mut optimal = Vec::new();
    for x in 0..1usize << n {
        let cut: f64 = masks
            .iter()
            .filter(|(m, _)| (x & m).count_ones() == 1)
            .map(|e| e.1)
            .sum();
        if cut > best + 1e-9 {
            best = cut;
            optimal.clear();
        }
        if (cut - best).abs() <= 1e-9 {
            optimal.push(x);
        }
    }
    Ok(MaxCutOptimum { value: best, optimal })
}

/// Angles `(β_l, γ_l)` for a level-`D` QAOA circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaSchedule {
    beta: Vec<f64>,
    gamma: Vec<f64>,
}

impl QaoaSchedule {
    pub fn new(beta: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        if beta.len() != gamma.len() {
            return Err(Error::invalid(
                "qaoa schedule",
                format!("{} β values but {} γ values", beta.len(), gamma.len()),
            ));
        }
        Ok(QaoaSchedule { beta, gamma })
    }

    pub fn level(&self) -> usize {
        self.beta.len()
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// `[β₁, γ₁, β₂, γ₂, …]`
    pub fn to_parameters(&self) -> Vec<f64> {
        self.beta.iter().zip(&self.gamma).flat_map(|(b, g)| [*b, *g]).collect()
    }

    pub fn from_parameters(theta: &[f64]) -> Result<Self> {
        if !theta.len().is_multiple_of(2) {
            return Err(Error::invalid("qaoa parameters", "need an even number of angles"));
        }
        Ok(QaoaSchedule {
            beta: theta.iter().step_by(2).copied().collect(),
            gamma: theta.iter().skip(1).step_by(2).copied().collect(),
        })
    }
}

/// `β_l = 1 − l/D`, `γ_l = l/D` for `l = 1…D`.
pub fn interpolation_schedule(level: usize) -> Result<QaoaSchedule> {
    if level == 0 {
        return Err(Error::invalid("qaoa level", "must be at least 1"));
    }
    let d = level as f64;
    QaoaSchedule::new(
        (1..=level).map(|l| 1.0 - l as f64 / d).collect(),
        (1..=level).map(|l| l as f64 / d).collect(),
    )
}

/// `|+⟩^⊗n`, then per level `e^{−iγ H_C}` followed by `e^{−iβ H_M}` with
/// `H_M = −Σ X_i`, i.e. `Rx(−2β)` on every qubit.
pub fn qaoa_circuit(cost: &PauliSum, schedule: &QaoaSchedule) -> Result<Circuit> {
    if !cost.is_diagonal() {
        return Err(Error::invalid(
            "qaoa cost",
            "Hamiltonian must contain only I and Z factors",
        ));
    }
    if !cost.is_real(1e-12) {
        return Err(Error::invalid("qaoa cost", "coefficients must be real"));
    }
    let n = cost.num_qubits();
    let mut c = Circuit::new(n);
    c.extend((0..n).map(|q| Gate::ry(q, FRAC_PI_2)))?;
    for (&beta, &gamma) in schedule.beta.iter().zip(&schedule.gamma) {
        for t in cost.terms().iter().filter(|t| !t.string.is_identity()) {
            c.push(Gate::PauliExp {
                angle: gamma * t.coeff.re,
                string: t.string.clone(),
            })?;
        }
        c.extend((0..n).map(|q| Gate::rx(q, -2.0 * beta)))?;
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaxCutAnsatz {
    /// Real-amplitude heuristic ansatz (use the `YOnly` rotation scheme).
    Heuristic(HeuristicAnsatzSpec),
    /// Level-`D` QAOA, started from the interpolation schedule.
    Qaoa { level: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxCutSettings {
    pub ansatz: MaxCutAnsatz,
    pub optimizer: Optimizer,
    pub config: OptimizerConfig,
    pub mode: EstimationMode,
    /// Measurements of the optimized state used to report a solution.
    pub sample_shots: u64,
}

impl MaxCutSettings {
    /// Exact-mode SPSA with a first step of 0.5 rad; MaxCut landscapes have a
    /// flat start near `|0…0⟩` and reward a bolder first move than chemistry.
    pub fn new(ansatz: MaxCutAnsatz, max_iterations: usize, seed: u64) -> Self {
        let mut config = OptimizerConfig {
            max_iterations,
            seed,
            ..Default::default()
        };
        config.spsa.target_step = 0.5;
        MaxCutSettings {
            ansatz,
            optimizer: Optimizer::Spsa,
            config,
            mode: EstimationMode::Exact,
            sample_shots: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxCutSolution {
    pub trace: OptimizationTrace,
    pub theta: Vec<f64>,
    pub energy: f64,
    pub optimum: MaxCutOptimum,
    /// Exact probability mass on all optimal partitions.
    pub success_probability: f64,
    pub histogram: Histogram,
    /// Most frequent sampled bitstring.
    pub solution: String,
    pub solution_cut: f64,
}

fn prepare(graph: &WeightedGraph, enc: &MaxCutEncoding, ansatz: &MaxCutAnsatz, theta: &[f64]) -> Result<QuantumState> {
    let circuit = match ansatz {
        MaxCutAnsatz::Heuristic(spec) => {
            if spec.n != graph.n_nodes {
                return Err(Error::QubitMismatch {
                    expected: graph.n_nodes,
                    found: spec.n,
                });
            }
            spec.circuit(theta)?
        }
        MaxCutAnsatz::Qaoa { .. } => qaoa_circuit(&enc.hamiltonian, &QaoaSchedule::from_parameters(theta)?)?,
    };
    let mut state = QuantumState::zero(graph.n_nodes)?;
    state.apply(&circuit)?;
    Ok(state)
}

/// Sum of `|amplitude|²` over the given basis indices.
pub fn success_probability(state: &QuantumState, optimum: &MaxCutOptimum) -> f64 {
    let amps = state.amplitudes();
    optimum.optimal.iter().map(|&i| amps[i].norm_sqr()).sum()
}

pub fn solve_maxcut_vqe(
    graph: &WeightedGraph,
    settings: &MaxCutSettings,
    init: &InitialPoint,
) -> Result<MaxCutSolution> {
    let enc = encode_maxcut(graph)?;
    let optimum = brute_force_maxcut(graph)?;
    let theta0 = match (&settings.ansatz, init) {
        (MaxCutAnsatz::Qaoa { level }, InitialPoint::Random { .. }) => interpolation_schedule(*level)?.to_parameters(),
        (MaxCutAnsatz::Qaoa { level }, init) => init.resolve(2 * level)?,
        (MaxCutAnsatz::Heuristic(spec), init) => init.resolve(spec.parameter_count())?,
    };
    let mut calls = 0u64;
    let trace = minimize(
        settings.optimizer,
        |theta: &[f64]| {
            let state = prepare(graph, &enc, &settings.ansatz, theta)?;
            let mode = match settings.mode {
                EstimationMode::Shots { seed, .. } => settings.mode.reseeded(seed.wrapping_add(calls)),
                EstimationMode::Exact => EstimationMode::Exact,
            };
            calls += 1;
            estimate(&state, &enc.hamiltonian, mode)
        },
        &theta0,
        &settings.config,
    )?;
    let theta = trace.best_theta.clone();
    let state = prepare(graph, &enc, &settings.ansatz, &theta)?;
    let energy = state.expectation(&enc.hamiltonian)?;
    let histogram = state.sample_bitstrings(settings.sample_shots.max(1), settings.config.seed)?;
    let solution = histogram
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(s, _)| s.clone())
        .expect("at least one shot");
    let bits: Vec<bool> = solution.chars().map(|c| c == '1').collect();
    Ok(MaxCutSolution {
        success_probability: success_probability(&state, &optimum),
        solution_cut: graph.cut_value(&bits),
        trace,
        theta,
        energy,
        optimum,
        histogram,
        solution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub beta: f64,
    pub gamma: f64,
    pub energy: f64,
    pub success_probability: f64,
}

/// Level-1 QAOA evaluated on a `points × points` grid over `[0, π]²`.
pub fn qaoa_grid_scan(graph: &WeightedGraph, points: usize) -> Result<Vec<GridPoint>> {
    if points < 2 {
        return Err(Error::invalid("grid points", "need at least 2 per axis"));
    }
    let enc = encode_maxcut(graph)?;
    let optimum = brute_force_maxcut(graph)?;
    let step = std::f64::consts::PI / (points - 1) as f64;
    let mut out = Vec::with_capacity(points * points);
    for bi in 0..points {
        for gi in 0..points {
            let (beta, gamma) = (bi as f64 * step, gi as f64 * step);
            let schedule = QaoaSchedule::new(vec![beta], vec![gamma])?;
            let mut state = QuantumState::zero(graph.n_nodes)?;
            state.apply(&qaoa_circuit(&enc.hamiltonian, &schedule)?)?;
            out.push(GridPoint {
                beta,
                gamma,
                energy: state.expectation(&enc.hamiltonian)?,
                success_probability: success_probability(&state, &optimum),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::RotationScheme;

    #[test]
    fn graph_validation() {
        assert!(WeightedGraph::new(2, [(0, 0, 1.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, 0.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 2, 1.0)]).is_err());
    }

    #[test]
    fn graph_file_parsing() {
        let g: WeightedGraph = "# square\n0 1 1\n1 2 2.5\n\n2 3 1 # tail\n".parse().unwrap();
        assert_eq!(g.n_nodes(), 4);
        assert_eq!(g.edges().len(), 3);
        let err = "0 1 1\n1 1 2\n".parse::<WeightedGraph>().unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        assert!(matches!(
            "0 1\n".parse::<WeightedGraph>(),
            Err(Error::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn single_edge() {
        let g = WeightedGraph::new(2, [(0, 1, 2.5)]).unwrap();
        let enc = encode_maxcut(&g).unwrap();
        assert_eq!(enc.hamiltonian.to_string().trim(), "2.5 ZZ");
        let opt = brute_force_maxcut(&g).unwrap();
        assert_eq!(opt.value, 2.5);
        assert_eq!(opt.bitstrings(2), vec!["01", "10"]);
        assert_eq!(enc.cut_from_energy(-2.5), 2.5);
    }

    #[test]
    fn small_brute_force_values() {
        assert_eq!(
            brute_force_maxcut(&WeightedGraph::complete(3, 1.0).unwrap())
                .unwrap()
                .value,
            2.0
        );
        let c4 = brute_force_maxcut(&WeightedGraph::cycle(4, 1.0).unwrap()).unwrap();
        assert_eq!(c4.value, 4.0);
        assert_eq!(c4.bitstrings(4), vec!["0101", "1010"]);
        let empty = brute_force_maxcut(&WeightedGraph::new(3, []).unwrap()).unwrap();
        assert_eq!(empty.value, 0.0);
        assert_eq!(empty.optimal.len(), 8);
        assert_eq!(brute_force_maxcut(&WeightedGraph::diamond()).unwrap().value, 4.0);
    }

    #[test]
    fn interpolation_values() {
        let s = interpolation_schedule(1).unwrap();
        assert_eq!((s.beta(), s.gamma()), (&[0.0][..], &[1.0][..]));
        let s = interpolation_schedule(2).unwrap();
        assert_eq!((s.beta(), s.gamma()), (&[0.5, 0.0][..], &[0.5, 1.0][..]));
        assert!(interpolation_schedule(0).is_err());
        assert_eq!(QaoaSchedule::from_parameters(&s.to_parameters()).unwrap(), s);
    }

    #[test]
    fn level_zero_and_zero_gamma_are_uniform() {
        let enc = encode_maxcut(&WeightedGraph::diamond()).unwrap();
        for schedule in [
            QaoaSchedule::new(vec![], vec![]).unwrap(),
            QaoaSchedule::new(vec![0.3, 1.1], vec![0.0, 0.0]).unwrap(),
        ] {
            let mut st = QuantumState::zero(4).unwrap();
            st.apply(&qaoa_circuit(&enc.hamiltonian, &schedule).unwrap()).unwrap();
            assert!(st.probabilities().iter().all(|p| (p - 1.0 / 16.0).abs() < 1e-12));
        }
    }

    #[test]
    fn non_diagonal_cost_rejected() {
        let h = crate::pauli::parse_hamiltonian("1.0 XZ\n").unwrap();
        assert!(qaoa_circuit(&h, &interpolation_schedule(1).unwrap()).is_err());
    }

    #[test]
    fn single_edge_heuristic_solves() {
        let g = WeightedGraph::new(2, [(0, 1, 1.0)]).unwrap();
        let settings = MaxCutSettings {
            ansatz: MaxCutAnsatz::Heuristic(HeuristicAnsatzSpec::new(2, 1, RotationScheme::YOnly)),
            optimizer: Optimizer::NelderMead,
            config: OptimizerConfig {
                max_iterations: 300,
                ..Default::default()
            },
            mode: EstimationMode::Exact,
            sample_shots: 256,
        };
        let s = solve_maxcut_vqe(&g, &settings, &InitialPoint::Random { seed: 2 }).unwrap();
        assert!(s.success_probability > 0.99, "{}", s.success_probability);
        assert_eq!(s.solution_cut, 1.0);
    }
}
