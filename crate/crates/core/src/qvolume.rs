//! Quantum volume `V_Q = max_n min(n, d(n))²` with `d(n) = ⌊1/(n·ε_eff(n))⌋`,
//! and connectivity models for the effective error rate.

use std::collections::HashMap;
use std::str::FromStr;

use petgraph::algo::{connected_components, dijkstra};
use petgraph::graph::{NodeIndex, UnGraph};
use petgraph::visit::Bfs;
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng;

/// Trials used when `ε_eff` of an explicit coupling graph is estimated.
pub const DEFAULT_ROUTING_TRIALS: usize = 200;

/// Undirected qubit coupling graph.
#[derive(Debug, Clone)]
pub struct CouplingGraph {
    graph: UnGraph<(), ()>,
}

impl CouplingGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut graph = UnGraph::with_capacity(n, 0);
        for _ in 0..n {
            graph.add_node(());
        }
        for (a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::invalid(
                    "coupling graph",
                    format!("bad edge ({a}, {b}) for {n} qubits"),
                ));
            }
            graph.update_edge(NodeIndex::new(a), NodeIndex::new(b), ());
        }
        Ok(CouplingGraph { graph })
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).expect("valid edges")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|q| (q - 1, q))).expect("valid edges")
    }

    /// Row-major `rows × cols` nearest-neighbour lattice.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let id = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        Self::from_edges(rows * cols, edges).expect("valid edges")
    }

    pub fn num_qubits(&self) -> usize {
        self.graph.node_count()
    }

    pub fn is_connected(&self) -> bool {
        self.num_qubits() <= 1 || connected_components(&self.graph) == 1
    }

    /// Subgraph induced by the first `n` nodes reached by breadth-first
    /// search from qubit 0; connected whenever the full graph is.
    pub fn bfs_subgraph(&self, n: usize) -> Result<CouplingGraph> {
        if n > self.num_qubits() {
            return Err(Error::invalid(
                "subset size",
                format!("{n} exceeds {} qubits", self.num_qubits()),
            ));
        }
        let mut order = Vec::with_capacity(n);
        if n > 0 {
            let mut bfs = Bfs::new(&self.graph, NodeIndex::new(0));
            while let Some(v) = bfs.next(&self.graph) {
                if order.len() == n {
                    break;
                }
                order.push(v.index());
            }
        }
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges = self.graph.edge_indices().filter_map(|e| {
            let (a, b) = self.graph.edge_endpoints(e)?;
            Some((*pos.get(&a.index())?, *pos.get(&b.index())?))
        });
        CouplingGraph::from_edges(order.len(), edges)
    }

    /// Hop distances from `a`; `None` for unreachable qubits.
    fn distances_from(&self, a: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; self.num_qubits()];
        for (v, d) in dijkstra(&self.graph, NodeIndex::new(a), None, |_| 1usize) {
            out[v.index()] = Some(d);
        }
        out
    }
}

/// SWAPs needed to make every pair adjacent, routing each pair
/// independently along a shortest path (`distance − 1` SWAPs).
pub fn routing_swaps(graph: &CouplingGraph, pairs: &[(usize, usize)]) -> Result<usize> {
    let mut total = 0;
    for &(a, b) in pairs {
        if a >= graph.num_qubits() || b >= graph.num_qubits() {
            return Err(Error::invalid("qubit pair", format!("({a}, {b}) out of range")));
        }
        let dist = graph.distances_from(a)[b]
            .ok_or_else(|| Error::invalid("coupling graph", format!("qubits {a} and {b} are disconnected")))?;
        total += dist.saturating_sub(1);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoutingEstimate {
    pub mean_swaps: f64,
    /// `(pairs + SWAPs) / pairs` per random layer, SWAPs counted as one
    /// two-qubit gate each.
    pub overhead_factor: f64,
    pub trials: usize,
}

/// Monte-Carlo over random depth-one layers: a uniformly random perfect
/// matching of the qubits (one idles when `n` is odd).
pub fn estimate_routing_overhead(graph: &CouplingGraph, trials: usize, seed: u64) -> Result<RoutingEstimate> {
    let n = graph.num_qubits();
    if n < 2 {
        return Err(Error::invalid("coupling graph", "needs at least 2 qubits"));
    }
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    if !graph.is_connected() {
        return Err(Error::invalid("coupling graph", "graph is disconnected"));
    }
    let dist: Vec<Vec<usize>> = (0..n)
        .map(|a| {
            graph
                .distances_from(a)
                .into_iter()
                .map(|d| d.expect("connected"))
                .collect()
        })
        .collect();
    let mut rng = rng::seeded(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0usize;
    for _ in 0..trials {
        perm.shuffle(&mut rng);
        swaps += perm.chunks_exact(2).map(|p| dist[p[0]][p[1]] - 1).sum::<usize>();
    }
    let mean_swaps = swaps as f64 / trials as f64;
    let pairs = (n / 2) as f64;
    Ok(RoutingEstimate {
        mean_swaps,
        overhead_factor: (pairs + mean_swaps) / pairs,
        trials,
    })
}

#[derive(Debug, Clone)]
pub enum Connectivity {
    AllToAll,
    PlanarGrid { rows: usize, cols: usize },
    LinearChain,
    Graph(CouplingGraph),
}

impl Connectivity {
    /// Near-square grid with at least `n` sites.
    pub fn planar_for(n: usize) -> Self {
        let rows = ((n as f64).sqrt().floor() as usize).max(1);
        Connectivity::PlanarGrid {
            rows,
            cols: n.div_ceil(rows),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Connectivity::AllToAll => "all-to-all",
            Connectivity::PlanarGrid { .. } => "planar",
            Connectivity::LinearChain => "linear",
            Connectivity::Graph(_) => "graph",
        }
    }
}

/// Connectivity kind without parameters, as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectivityKind {
    AllToAll,
    Planar,
    Linear,
    Graph,
}

impl FromStr for ConnectivityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "all-to-all" | "all" => Ok(ConnectivityKind::AllToAll),
            "planar" | "planar-grid" | "grid" => Ok(ConnectivityKind::Planar),
            "linear" | "linear-chain" | "chain" => Ok(ConnectivityKind::Linear),
            "graph" => Ok(ConnectivityKind::Graph),
            other => Err(Error::invalid(
                "connectivity",
                format!("unknown connectivity {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DeviceModel {
    pub n_qubits: usize,
    pub epsilon: f64,
    pub connectivity: Connectivity,
    /// Constant in `ε_eff ∝ √n ε` (planar) and `ε_eff ∝ n ε` (linear).
    pub k: f64,
    /// Monte-Carlo settings for explicit coupling graphs.
    pub routing_trials: usize,
    pub seed: u64,
}

impl DeviceModel {
    pub fn new(n_qubits: usize, epsilon: f64, connectivity: Connectivity) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid("eps", format!("{epsilon} is outside (0, 1)")));
        }
        if n_qubits < 2 {
            return Err(Error::invalid("n", "a device needs at least 2 qubits"));
        }
        match &connectivity {
            Connectivity::PlanarGrid { rows, cols } if rows * cols < n_qubits => {
                return Err(Error::invalid(
                    "connectivity",
                    format!("{rows}x{cols} grid holds fewer than {n_qubits} qubits"),
                ));
            }
            Connectivity::Graph(g) if g.num_qubits() != n_qubits => {
                return Err(Error::QubitMismatch {
                    expected: n_qubits,
                    found: g.num_qubits(),
                });
            }
            Connectivity::Graph(g) if !g.is_connected() => {
                return Err(Error::invalid("connectivity", "coupling graph is disconnected"));
            }
            _ => {}
        }
        Ok(DeviceModel {
            n_qubits,
            epsilon,
            connectivity,
            k: 1.0,
            routing_trials: DEFAULT_ROUTING_TRIALS,
            seed: 0,
        })
    }

    pub fn with_k(mut self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::invalid("k", format!("{k} must be positive")));
        }
        self.k = k;
        Ok(self)
    }
}

pub fn effective_error_rate(device: &DeviceModel, n: usize) -> Result<f64> {
    if n < 2 || n > device.n_qubits {
        return Err(Error::invalid("n", format!("{n} is outside 2..={}", device.n_qubits)));
    }
    let eps = device.epsilon;
    Ok(match &device.connectivity {
        Connectivity::AllToAll => eps,
        Connectivity::PlanarGrid { .. } => device.k * (n as f64).sqrt() * eps,
        Connectivity::LinearChain => device.k * n as f64 * eps,
        Connectivity::Graph(g) => {
            let sub = g.bfs_subgraph(n)?;
            eps * estimate_routing_overhead(&sub, device.routing_trials, device.seed)?.overhead_factor
        }
    })
}

/// `⌊1/(n·ε_eff)⌋`, robust to the rounding of exact quotients such as 1/0.01.
pub fn achievable_depth(n: usize, eps_eff: f64) -> u64 {
    let x = 1.0 / (n as f64 * eps_eff);
    (x * (1.0 + 1e-12)).floor() as u64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QvRow {
    pub n: usize,
    pub eps_eff: f64,
    pub depth: u64,
    /// `min(n, d)²`
    pub volume: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QvReport {
    pub rows: Vec<QvRow>,
    pub volume: u64,
    /// Smallest `n` attaining the maximum.
    pub best_n: usize,
}

impl QvReport {
    pub fn row(&self, n: usize) -> Option<&QvRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

pub fn quantum_volume(device: &DeviceModel) -> Result<QvReport> {
    let mut rows = Vec::with_capacity(device.n_qubits - 1);
    let (mut volume, mut best_n) = (0, 2);
    for n in 2..=device.n_qubits {
        let eps_eff = effective_error_rate(device, n)?;
        let depth = achievable_depth(n, eps_eff);
        let side = depth.min(n as u64);
        let v = side * side;
        if v > volume {
            volume = v;
            best_n = n;
        }
        rows.push(QvRow {
            n,
            eps_eff,
            depth,
            volume: v,
        });
    }
    Ok(QvReport { rows, volume, best_n })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapCell {
    pub epsilon: f64,
    pub n_qubits: usize,
    pub volume: u64,
}

/// `V_Q` over a grid of base error rates and device sizes.
pub fn volume_heatmap(
    epsilons: &[f64],
    sizes: &[usize],
    connectivity: &Connectivity,
    k: f64,
) -> Result<Vec<HeatmapCell>> {
    let mut out = Vec::with_capacity(epsilons.len() * sizes.len());
    for &epsilon in epsilons {
        for &n_qubits in sizes {
            let conn = match connectivity {
                Connectivity::PlanarGrid { .. } => Connectivity::planar_for(n_qubits),
                Connectivity::Graph(_) => {
                    return Err(Error::invalid(
                        "connectivity",
                        "heatmaps need a size-free connectivity model",
                    ))
                }
                other => other.clone(),
            };
            let device = DeviceModel::new(n_qubits, epsilon, conn)?.with_k(k)?;
            out.push(HeatmapCell {
                epsilon,
                n_qubits,
                volume: quantum_volume(&device)?.volume,
            });
        }
    }
    Ok(out)
}

impl std::fmt::Display for Connectivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Connectivity::PlanarGrid { rows, cols } => write!(f, "planar({rows}x{cols})"),
            other => f.write_str(other.name()),
        }
    }
}
