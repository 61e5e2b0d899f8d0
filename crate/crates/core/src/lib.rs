//! Variational quantum eigensolver and QAOA toolkit on a dense state-vector simulator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ansatz;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod fermion;
pub mod limits;
pub mod noise;
pub mod optimize;
pub mod pauli;
pub mod qaoa;
pub mod qvolume;
pub mod rng;
pub mod selftest;
pub mod statevec;
pub mod vqe;

pub use error::{Error, Result};
