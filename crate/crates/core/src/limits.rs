//! Size limits for dense simulation and exact-diagonalization oracles.
//!
//! The `VQEFORGE_ORACLE_LIMIT` environment variable sets the qubit (or mode)
//! cap of every dense-matrix oracle. When unset, each oracle uses its own
//! default.

use crate::error::{Error, Result};

pub const ORACLE_LIMIT_ENV: &str = "VQEFORGE_ORACLE_LIMIT";

/// Default qubit cap for [`crate::pauli::PauliSum::to_matrix`].
pub const PAULI_ORACLE_DEFAULT: usize = 12;
/// Default mode cap for [`crate::fermion::fermion_matrix`].
pub const FERMION_ORACLE_DEFAULT: usize = 10;
/// Largest register accepted by the state-vector simulator.
pub const STATEVEC_MAX_QUBITS: usize = 20;
/// Largest register accepted by the density-matrix integrator.
pub const DENSITY_MAX_QUBITS: usize = 8;

fn env_cap() -> Option<usize> {
    std::env::var(ORACLE_LIMIT_ENV).ok().and_then(|v| v.trim().parse().ok())
}

pub(crate) fn oracle_limit(default: usize) -> usize {
    env_cap().unwrap_or(default)
}

pub(crate) fn check(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        return Err(Error::SizeLimit { what, value, limit });
    }
    Ok(())
}
