//! Command-line experiment runner.
//!
//! Every subcommand writes into `--out`: tabular results as CSV whose first
//! line is `# config_hash=<sha256> seed=<seed>`, a `<cmd>_summary.txt` of
//! `key=value` lines, and a `<cmd>_meta.json` sidecar that holds the only
//! time-dependent data. The config hash covers every flag except `--out`.

use std::f64::consts::PI;
use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rand::Rng as _;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::ansatz::{Entangler, HeuristicAnsatzSpec, RotationScheme, UccsdSpec};
use crate::error::{Error, Result};
use crate::estimator::EstimationMode;
use crate::fermion::h2_hamiltonian;
use crate::noise::{
    circuit_to_schedule, mitigated_expectation, DensityMatrix, ExtrapolationPlan, NoiseKind, NoiseModel,
};
use crate::optimize::{Optimizer, OptimizerConfig};
use crate::pauli::{load_hamiltonian, PauliSum};
use crate::qaoa::{
    brute_force_maxcut, encode_maxcut, qaoa_circuit, qaoa_grid_scan, solve_maxcut_vqe, MaxCutAnsatz, MaxCutSettings,
    QaoaSchedule, WeightedGraph,
};
use crate::qvolume::{quantum_volume, volume_heatmap, Connectivity, ConnectivityKind, CouplingGraph, DeviceModel};
use crate::rng;
use crate::selftest::run_selftest;
use crate::statevec::{bitstring, QuantumState};
use crate::vqe::{
    dissociation_curve, exact_ground_energy, format_results, run_vqe, AnsatzChoice, InitialPoint, VqeProblem,
};

#[derive(Debug, Parser)]
#[command(
    name = "vqeforge",
    version,
    about = "Variational quantum algorithm experiments on a state-vector simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "vqeforge-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// VQE on the two-qubit H₂ Hamiltonian or a Hamiltonian file.
    H2(VqeArgs),
    /// Energy-vs-distance table from a directory of Hamiltonian files.
    Curve(CurveArgs),
    /// MaxCut by VQE or QAOA with success probability and histogram.
    Maxcut(MaxCutArgs),
    /// Level-1 QAOA energy and success probability over a (β, γ) grid.
    QaoaScan(ScanArgs),
    /// Zero-noise extrapolation under Lindblad noise.
    Mitigate(MitigateArgs),
    /// Quantum volume of a device model, plus a heatmap grid.
    Qv(QvArgs),
    /// Oracle-equivalence checks.
    Selftest(SelftestArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::H2(_) => "h2",
            Command::Curve(_) => "curve",
            Command::Maxcut(_) => "maxcut",
            Command::QaoaScan(_) => "qaoa-scan",
            Command::Mitigate(_) => "mitigate",
            Command::Qv(_) => "qv",
            Command::Selftest(_) => "selftest",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Command::H2(a) => a.opt.seed,
            Command::Curve(a) => a.vqe.opt.seed,
            Command::Maxcut(a) => a.opt.seed,
            Command::QaoaScan(_) => 0,
            Command::Mitigate(a) => a.seed,
            Command::Qv(a) => a.seed,
            Command::Selftest(a) => a.seed,
        }
    }

    /// SHA-256 of the canonical JSON form of the command and its flags.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("plain data serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptimizerArgs {
    /// spsa or nelder-mead.
    #[arg(long, default_value = "spsa")]
    pub optimizer: String,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// exact or shots.
    #[arg(long, default_value = "exact")]
    pub mode: String,
    /// Shots per commuting group in shots mode.
    #[arg(long, default_value_t = 1024)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl OptimizerArgs {
    fn optimizer(&self) -> Result<Optimizer> {
        self.optimizer.parse()
    }

    fn mode(&self) -> Result<EstimationMode> {
        match self.mode.as_str() {
            "exact" => Ok(EstimationMode::Exact),
            "shots" => Ok(EstimationMode::Shots {
                shots: self.shots,
                seed: self.seed,
            }),
            other => Err(Error::invalid("mode", format!("{other:?} is not exact or shots"))),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VqeArgs {
    /// Hamiltonian file; defaults to the built-in H₂ Hamiltonian.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// heuristic or uccsd.
    #[arg(long, default_value = "heuristic")]
    pub ansatz: String,
    /// Entangler repetitions D of the heuristic ansatz.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// zxz, yz or y.
    #[arg(long, default_value = "yz")]
    pub rotation: String,
    /// cz-chain, cz-all or cnot-chain.
    #[arg(long, default_value = "cz-chain")]
    pub entangler: String,
    /// Electrons in the UCCSD reference.
    #[arg(long, default_value_t = 1)]
    pub electrons: usize,
    #[arg(long = "trotter-steps", default_value_t = 1)]
    pub trotter_steps: usize,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

impl VqeArgs {
    fn ansatz(&self, n: usize) -> Result<AnsatzChoice> {
        match self.ansatz.as_str() {
            "heuristic" => Ok(AnsatzChoice::Heuristic(
                HeuristicAnsatzSpec::new(n, self.depth, self.rotation.parse::<RotationScheme>()?)
                    .with_entangler(self.entangler.parse::<Entangler>()?),
            )),
            "uccsd" => Ok(AnsatzChoice::uccsd(UccsdSpec::closed_shell(
                n,
                self.electrons,
                self.trotter_steps,
            )?)),
            other => Err(Error::invalid("ansatz", format!("{other:?} is not heuristic or uccsd"))),
        }
    }

    fn problem(&self, hamiltonian: PauliSum) -> Result<VqeProblem> {
        let ansatz = self.ansatz(hamiltonian.num_qubits())?;
        let config = OptimizerConfig {
            max_iterations: self.opt.max_iter.unwrap_or(300),
            seed: self.opt.seed,
            ..Default::default()
        };
        config.validate()?;
        Ok(VqeProblem::new(hamiltonian, ansatz)?
            .with_mode(self.opt.mode()?)
            .with_optimizer(self.opt.optimizer()?, config))
    }

    fn init(&self) -> InitialPoint {
        InitialPoint::Random { seed: self.opt.seed }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CurveArgs {
    /// Directory of `*.ham` files whose names end in the bond distance.
    #[arg(long)]
    pub dir: PathBuf,
    #[command(flatten)]
    pub vqe: VqeArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MaxCutArgs {
    /// Edge list `i j w`; defaults to the built-in 4-node diamond.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// heuristic or qaoa.
    #[arg(long, default_value = "heuristic")]
    pub ansatz: String,
    /// Entangler repetitions, or the QAOA level.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Rotation scheme of the heuristic ansatz.
    #[arg(long, default_value = "y")]
    pub rotation: String,
    /// Measurements of the final state for the histogram.
    #[arg(long, default_value_t = 1024)]
    pub samples: u64,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Grid points per axis over [0, π].
    #[arg(long, default_value_t = 33)]
    pub points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MitigateArgs {
    /// Observable; defaults to the built-in H₂ Hamiltonian.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Entangler repetitions of the YZ state-preparation circuit.
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// amplitude-damping, dephasing or depolarizing.
    #[arg(long, default_value = "amplitude-damping")]
    pub noise: String,
    /// Noise rate λ per unit time.
    #[arg(long = "noise-rate", default_value_t = 0.002)]
    pub noise_rate: f64,
    #[arg(long = "scale-factors", value_delimiter = ',', default_value = "1,2")]
    pub scale_factors: Vec<f64>,
    /// Duration of each gate at c = 1.
    #[arg(long = "gate-time", default_value_t = 1.0)]
    pub gate_time: f64,
    /// Seed for the random circuit angles.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QvArgs {
    /// all-to-all, planar, linear or graph.
    #[arg(long, default_value = "all-to-all")]
    pub connectivity: String,
    /// Base two-qubit error rate ε.
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
    /// Device size N.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Connectivity constant in ε_eff.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Coupling graph edge list for `--connectivity graph`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Random matchings per size for coupling graphs.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// An error tagged with the flag it came from.
#[derive(Debug)]
pub struct CliError {
    pub flag: Option<&'static str>,
    pub error: Error,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        self.error.exit_code()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.flag {
            Some(flag) => write!(f, "{flag}: {}", self.error),
            None => write!(f, "{}", self.error),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError { flag: None, error }
    }
}

trait FlagContext<T> {
    fn flag(self, flag: &'static str) -> std::result::Result<T, CliError>;
}

impl<T> FlagContext<T> for Result<T> {
    fn flag(self, flag: &'static str) -> std::result::Result<T, CliError> {
        self.map_err(|error| CliError {
            flag: Some(flag),
            error,
        })
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Files written by one run and the summary text.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub summary: String,
    pub files: Vec<PathBuf>,
}

struct Writer<'a> {
    out: &'a Path,
    command: &'a Command,
    hash: String,
    files: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(out: &'a Path, command: &'a Command) -> CliResult<Self> {
        fs::create_dir_all(out).map_err(|e| Error::io(out, e)).flag("--out")?;
        Ok(Writer {
            out,
            command,
            hash: command.config_hash(),
            files: Vec::new(),
        })
    }

    fn header(&self) -> String {
        format!("# config_hash={} seed={}\n", self.hash, self.command.seed())
    }

    fn write(&mut self, name: &str, body: &[u8]) -> CliResult<PathBuf> {
        let path = self.out.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e)).flag("--out")?;
        self.files.push(path.clone());
        Ok(path)
    }

    fn csv<R, I>(&mut self, name: &str, header: &[&str], rows: I) -> CliResult<PathBuf>
    where
        R: IntoIterator<Item = String>,
        I: IntoIterator<Item = R>,
    {
        let mut buf = self.header().into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let wrap = |e: csv::Error| Error::Numeric(format!("writing {name}: {e}"));
            w.write_record(header).map_err(wrap)?;
            for row in rows {
                w.write_record(row).map_err(wrap)?;
            }
            w.flush().map_err(|e| Error::Numeric(format!("writing {name}: {e}")))?;
        }
        self.write(name, &buf)
    }

    fn finish(mut self, body: &str) -> CliResult<RunOutput> {
        let name = self.command.name();
        let summary = format!(
            "command={name}\nconfig_hash={}\nseed={}\n{body}",
            self.hash,
            self.command.seed()
        );
        self.write(&format!("{name}_summary.txt"), summary.as_bytes())?;
        let created = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let meta = serde_json::json!({
            "command": name,
            "config_hash": self.hash,
            "seed": self.command.seed(),
            "version": env!("CARGO_PKG_VERSION"),
            "created_unix": created,
            "config": self.command,
        });
        let text = serde_json::to_string_pretty(&meta).expect("plain data serializes");
        self.write(&format!("{name}_meta.json"), text.as_bytes())?;
        Ok(RunOutput {
            summary,
            files: self.files,
        })
    }
}

fn hamiltonian_or_h2(path: &Option<PathBuf>) -> CliResult<PauliSum> {
    match path {
        Some(p) => load_hamiltonian(p).flag("--hamiltonian"),
        None => Ok(h2_hamiltonian()),
    }
}

fn graph_or_diamond(path: &Option<PathBuf>) -> CliResult<WeightedGraph> {
    match path {
        Some(p) => WeightedGraph::load(p).flag("--graph"),
        None => Ok(WeightedGraph::diamond()),
    }
}

/// Runs one subcommand, writing its files under `out`.
pub fn run(command: &Command, out: &Path) -> CliResult<RunOutput> {
    let mut w = Writer::new(out, command)?;
    let body = match command {
        Command::H2(a) => run_h2(a, &mut w)?,
        Command::Curve(a) => run_curve(a, &mut w)?,
        Command::Maxcut(a) => run_maxcut(a, &mut w)?,
        Command::QaoaScan(a) => run_scan(a, &mut w)?,
        Command::Mitigate(a) => run_mitigate(a, &mut w)?,
        Command::Qv(a) => run_qv(a, &mut w)?,
        Command::Selftest(a) => {
            let (body, failed) = run_selftest_cmd(a, &mut w)?;
            let output = w.finish(&body)?;
            if failed > 0 {
                return Err(Error::Numeric(format!("{failed} selftest check(s) failed")).into());
            }
            return Ok(output);
        }
    };
    w.finish(&body)
}

fn run_h2(a: &VqeArgs, w: &mut Writer) -> CliResult<String> {
    let h = hamiltonian_or_h2(&a.hamiltonian)?;
    let problem = a.problem(h)?;
    let result = run_vqe(&problem, &a.init())?;
    let mut trace = w.header().into_bytes();
    result.trace.write_csv(&mut trace)?;
    w.write("h2_trace.csv", &trace)?;
    let mut s = format_results(&problem, &result, a.opt.seed, Some(Path::new("h2_trace.csv")));
    let ground = exact_ground_energy(&problem.hamiltonian)?;
    let _ = writeln!(s, "ground_energy={ground:.12}");
    let _ = writeln!(s, "energy_error={:.3e}", result.noiseless_energy - ground);
    Ok(s)
}

fn run_curve(a: &CurveArgs, w: &mut Writer) -> CliResult<String> {
    let first = fs::read_dir(&a.dir)
        .map_err(|e| Error::io(&a.dir, e))
        .flag("--dir")?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "ham"))
        .min()
        .ok_or_else(|| Error::invalid("dir", format!("no .ham files in {}", a.dir.display())))?;
    let template = a.vqe.problem(load_hamiltonian(&first).flag("--dir")?)?;
    let points = dissociation_curve(&a.dir, &template, &a.vqe.init()).flag("--dir")?;
    w.csv(
        "curve.csv",
        &["distance", "ground_energy", "vqe_energy", "std_error", "error", "file"],
        points.iter().map(|p| {
            [
                p.distance.to_string(),
                p.ground_energy.to_string(),
                p.vqe_energy.to_string(),
                p.std_error.to_string(),
                (p.vqe_energy - p.ground_energy).to_string(),
                p.file
                    .file_name()
                    .map(|f| f.to_string_lossy().into_owned())
                    .unwrap_or_default(),
            ]
        }),
    )?;
    let worst = points
        .iter()
        .map(|p| (p.vqe_energy - p.ground_energy).abs())
        .fold(0.0, f64::max);
    Ok(format!("points={}\nmax_abs_error={worst:.3e}\n", points.len()))
}

fn run_maxcut(a: &MaxCutArgs, w: &mut Writer) -> CliResult<String> {
    let graph = graph_or_diamond(&a.graph)?;
    let n = graph.n_nodes();
    let ansatz = match a.ansatz.as_str() {
        "heuristic" => MaxCutAnsatz::Heuristic(HeuristicAnsatzSpec::new(n, a.depth, a.rotation.parse()?)),
        "qaoa" => MaxCutAnsatz::Qaoa { level: a.depth },
        other => return Err(Error::invalid("ansatz", format!("{other:?} is not heuristic or qaoa")).into()),
    };
    let mut settings = MaxCutSettings::new(ansatz.clone(), a.opt.max_iter.unwrap_or(100), a.opt.seed);
    settings.optimizer = a.opt.optimizer()?;
    settings.mode = a.opt.mode()?;
    settings.sample_shots = a.samples;
    settings.config.validate()?;
    let sol = solve_maxcut_vqe(&graph, &settings, &InitialPoint::Random { seed: a.opt.seed })?;

    let circuit = match &ansatz {
        MaxCutAnsatz::Heuristic(spec) => spec.circuit(&sol.theta)?,
        MaxCutAnsatz::Qaoa { .. } => qaoa_circuit(
            &encode_maxcut(&graph)?.hamiltonian,
            &QaoaSchedule::from_parameters(&sol.theta)?,
        )?,
    };
    let mut state = QuantumState::zero(n)?;
    state.apply(&circuit)?;
    let probs = state.probabilities();
    w.csv(
        "maxcut_histogram.csv",
        &["bitstring", "probability", "count", "cut", "optimal"],
        probs.iter().enumerate().map(|(i, p)| {
            let b = bitstring(n, i);
            let bits: Vec<bool> = b.chars().map(|c| c == '1').collect();
            [
                b.clone(),
                p.to_string(),
                sol.histogram.get(&b).copied().unwrap_or(0).to_string(),
                graph.cut_value(&bits).to_string(),
                sol.optimum.optimal.contains(&i).to_string(),
            ]
        }),
    )?;
    let mut trace = w.header().into_bytes();
    sol.trace.write_csv(&mut trace)?;
    w.write("maxcut_trace.csv", &trace)?;

    let mut s = String::new();
    let _ = writeln!(s, "nodes={n}");
    let _ = writeln!(s, "edges={}", graph.edges().len());
    let _ = writeln!(s, "ansatz={}", a.ansatz);
    let _ = writeln!(s, "depth={}", a.depth);
    let _ = writeln!(s, "evaluations={}", sol.trace.evaluations());
    let _ = writeln!(s, "energy={:.12}", sol.energy);
    let _ = writeln!(s, "max_cut={}", sol.optimum.value);
    let _ = writeln!(s, "optimal_bitstrings={}", sol.optimum.bitstrings(n).join(","));
    let _ = writeln!(s, "success_probability={:.6}", sol.success_probability);
    let _ = writeln!(s, "solution={}", sol.solution);
    let _ = writeln!(s, "solution_cut={}", sol.solution_cut);
    Ok(s)
}

fn run_scan(a: &ScanArgs, w: &mut Writer) -> CliResult<String> {
    let graph = graph_or_diamond(&a.graph)?;
    let grid = qaoa_grid_scan(&graph, a.points).flag("--points")?;
    w.csv(
        "qaoa_scan.csv",
        &["beta", "gamma", "energy", "success_probability"],
        grid.iter().map(|g| {
            [
                g.beta.to_string(),
                g.gamma.to_string(),
                g.energy.to_string(),
                g.success_probability.to_string(),
            ]
        }),
    )?;
    let best = grid
        .iter()
        .min_by(|x, y| x.energy.total_cmp(&y.energy))
        .expect("grid is non-empty");
    let optimum = brute_force_maxcut(&graph)?;
    Ok(format!(
        "points={}\nmax_cut={}\nbest_beta={:.6}\nbest_gamma={:.6}\nbest_energy={:.12}\nbest_success_probability={:.6}\n",
        grid.len(),
        optimum.value,
        best.beta,
        best.gamma,
        best.energy,
        best.success_probability
    ))
}

fn run_mitigate(a: &MitigateArgs, w: &mut Writer) -> CliResult<String> {
    let observable = hamiltonian_or_h2(&a.hamiltonian)?;
    let n = observable.num_qubits();
    let spec = HeuristicAnsatzSpec::new(n, a.depth, RotationScheme::Yz);
    let mut r = rng::seeded(a.seed);
    let theta: Vec<f64> = (0..spec.parameter_count()).map(|_| r.random_range(-PI..PI)).collect();
    let circuit = spec.circuit(&theta)?;
    let schedule = circuit_to_schedule(&circuit, a.gate_time).flag("--gate-time")?;
    let noise = NoiseModel::new(a.noise.parse::<NoiseKind>()?, a.noise_rate).flag("--noise-rate")?;
    let plan = ExtrapolationPlan::new(a.scale_factors.clone()).flag("--scale-factors")?;

    let mut ideal = QuantumState::zero(n)?;
    ideal.apply(&circuit)?;
    let noiseless = ideal.expectation(&observable)?;
    let rho0 = DensityMatrix::zero(n)?;
    let m = mitigated_expectation(&rho0, &schedule, &noise, &observable, &plan)?;

    w.csv(
        "mitigate.csv",
        &["c", "weight", "raw", "error"],
        m.raw
            .iter()
            .zip(plan.weights())
            .map(|(&(c, v), g)| [c.to_string(), g.to_string(), v.to_string(), (v - noiseless).to_string()]),
    )?;
    let err_raw = (m.unmitigated - noiseless).abs();
    let err_mit = (m.mitigated - noiseless).abs();
    let mut s = String::new();
    let _ = writeln!(s, "qubits={n}");
    let _ = writeln!(s, "gates={}", circuit.len());
    let _ = writeln!(s, "total_time={}", schedule.total_time());
    let _ = writeln!(s, "noise={}", noise.kind);
    let _ = writeln!(s, "noise_rate={}", noise.rate);
    let _ = writeln!(s, "scale_factors={}", join(plan.scale_factors()));
    let _ = writeln!(s, "weights={}", join(plan.weights()));
    let _ = writeln!(s, "noiseless={noiseless:.12}");
    let _ = writeln!(s, "unmitigated={:.12}", m.unmitigated);
    let _ = writeln!(s, "mitigated={:.12}", m.mitigated);
    let _ = writeln!(s, "error_unmitigated={err_raw:.3e}");
    let _ = writeln!(s, "error_mitigated={err_mit:.3e}");
    if err_mit > 0.0 {
        let _ = writeln!(s, "improvement={:.3}", err_raw / err_mit);
    }
    Ok(s)
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

const HEATMAP_SIZES: [usize; 10] = [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024];

fn heatmap_epsilons() -> Vec<f64> {
    (0..=16).map(|k| 10f64.powf(-1.0 - k as f64 / 4.0)).collect()
}

fn run_qv(a: &QvArgs, w: &mut Writer) -> CliResult<String> {
    let connectivity = match a.connectivity.parse::<ConnectivityKind>()? {
        ConnectivityKind::AllToAll => Connectivity::AllToAll,
        ConnectivityKind::Planar => Connectivity::planar_for(a.n),
        ConnectivityKind::Linear => Connectivity::LinearChain,
        ConnectivityKind::Graph => {
            let Some(path) = &a.graph else {
                return Err(Error::invalid("graph", "--connectivity graph needs --graph FILE").into());
            };
            let edges = WeightedGraph::load(path).flag("--graph")?;
            let g = CouplingGraph::from_edges(edges.n_nodes(), edges.edges().iter().map(|&(i, j, _)| (i, j)))
                .flag("--graph")?;
            Connectivity::Graph(g)
        }
    };
    let mut device = DeviceModel::new(a.n, a.eps, connectivity)?.with_k(a.k)?;
    device.routing_trials = a.trials;
    device.seed = a.seed;
    let report = quantum_volume(&device)?;
    w.csv(
        "qv.csv",
        &["n", "eps_eff", "depth", "volume"],
        report.rows.iter().map(|r| {
            [
                r.n.to_string(),
                format!("{:e}", r.eps_eff),
                r.depth.to_string(),
                r.volume.to_string(),
            ]
        }),
    )?;
    let mut s = String::new();
    let _ = writeln!(s, "connectivity={}", device.connectivity);
    let _ = writeln!(s, "eps={:e}", a.eps);
    let _ = writeln!(s, "n={}", a.n);
    let _ = writeln!(s, "k={}", a.k);
    if let Some(row) = report.row(a.n) {
        let _ = writeln!(s, "eps_eff_at_n={:e}", row.eps_eff);
        let _ = writeln!(s, "depth_at_n={}", row.depth);
    }
    let _ = writeln!(s, "volume={}", report.volume);
    let _ = writeln!(s, "best_n={}", report.best_n);
    if !matches!(device.connectivity, Connectivity::Graph(_)) {
        let cells = volume_heatmap(&heatmap_epsilons(), &HEATMAP_SIZES, &device.connectivity, a.k)?;
        w.csv(
            "qv_heatmap.csv",
            &["epsilon", "n_qubits", "volume"],
            cells
                .iter()
                .map(|c| [format!("{:e}", c.epsilon), c.n_qubits.to_string(), c.volume.to_string()]),
        )?;
        let _ = writeln!(s, "heatmap_cells={}", cells.len());
    }
    Ok(s)
}

fn run_selftest_cmd(a: &SelftestArgs, w: &mut Writer) -> CliResult<(String, usize)> {
    let checks = run_selftest(a.seed);
    w.csv(
        "selftest.csv",
        &["check", "passed", "deviation", "tolerance"],
        checks.iter().map(|c| {
            [
                c.name.to_string(),
                c.passed.to_string(),
                format!("{:e}", c.deviation),
                format!("{:e}", c.tolerance),
            ]
        }),
    )?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut s = String::new();
    for c in &checks {
        let _ = writeln!(
            s,
            "{}={} deviation={:e}",
            c.name.replace(' ', "_"),
            if c.passed { "PASS" } else { "FAIL" },
            c.deviation
        );
    }
    let _ = writeln!(s, "failed={failed}");
    Ok((s, failed))
}

/// Parses `args`, runs, prints the summary and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command, &cli.out) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(output.summary.as_bytes());
            0
        }
        Err(e) => {
            eprintln!("vqeforge {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}
