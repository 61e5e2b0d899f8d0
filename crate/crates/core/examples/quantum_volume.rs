//! Quantum volume under different connectivity models.

use vqeforge::qvolume::{estimate_routing_overhead, quantum_volume, Connectivity, CouplingGraph, DeviceModel};

fn main() -> vqeforge::Result<()> {
    let device = DeviceModel::new(1000, 1e-4, Connectivity::AllToAll)?;
    let report = quantum_volume(&device)?;
    for n in [100, 1000] {
        let row = report.row(n).expect("n within device");
        println!("all-to-all n={n}: d={} V={}", row.depth, row.volume);
    }
    println!("V_Q = {} at n* = {}", report.volume, report.best_n);

    for conn in [
        Connectivity::AllToAll,
        Connectivity::planar_for(100),
        Connectivity::LinearChain,
    ] {
        let r = quantum_volume(&DeviceModel::new(100, 1e-3, conn.clone())?)?;
        println!(
            "{:>14}, ε=1e-3, N=100: V_Q = {:>5} at n* = {}",
            conn.to_string(),
            r.volume,
            r.best_n
        );
    }

    for n in [4, 8, 16] {
        let est = estimate_routing_overhead(&CouplingGraph::path(n), 500, 1)?;
        println!(
            "chain of {n:>2}: {:.2} SWAPs per matching, overhead ×{:.2}",
            est.mean_swaps, est.overhead_factor
        );
    }
    let ring = CouplingGraph::from_edges(12, (0..12).map(|i| (i, (i + 1) % 12)))?;
    let mut dev = DeviceModel::new(12, 1e-3, Connectivity::Graph(ring))?;
    dev.seed = 5;
    let r = quantum_volume(&dev)?;
    println!("12-qubit ring: V_Q = {} at n* = {}", r.volume, r.best_n);
    Ok(())
}
