//! Sparse state vectors over the qubit register and diagonal projectors.

mod basis;
mod projector;
mod state;

pub use basis::BasisState;
pub use projector::{constraint_projector, DiagonalProjector, DEFAULT_REGISTER_CAP_BITS};
pub use state::{StateVector, NORM_TOL, PRUNE_EPS};

use thiserror::Error;

use crate::boolnet::NetworkError;

/// Probabilities of reading the output qubit as 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YMarginal {
    pub p0: f64,
    pub p1: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("state has no component in the admissible subspace")]
    ZeroSurvival,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("register width mismatch: expected {expected} qubits, got {got}")]
    QubitMismatch { expected: usize, got: usize },
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("measurement needs at least one qubit")]
    EmptySubset,
    #[error("qubit {0} listed twice")]
    DuplicateQubit(usize),
    #[error("outcome has zero probability or the wrong length")]
    InvalidOutcome,
    #[error("register of {bits} enumerated bits exceeds the cap of {cap}")]
    RegisterTooLarge { bits: usize, cap: usize },
    #[error(transparent)]
    Network(#[from] NetworkError),
}
