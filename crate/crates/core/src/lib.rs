//! Simulation of computation by continuous incomplete measurement.
//!
//! A Boolean constraint network ([`boolnet`]) is compiled to a register of
//! coexisting qubits and a diagonal projector onto the basis states that
//! satisfy every gate ([`hilbert`]). Two measurement laws ([`engines`])
//! evolve a state while only the output qubit is rotated: repeated
//! projective measurement, which freezes the state, and a continuous
//! constrained update, which drags the inputs along with the output.
//! [`protocol`] runs the end-to-end experiments.

pub mod boolnet;
pub mod engines;
pub mod fixtures;
pub mod hilbert;
pub mod protocol;

pub use boolnet::{Assignment, BoolNetwork, Constraint, Form, NetworkError, Role, VarId};
pub use hilbert::{BasisState, DiagonalProjector, StateError, StateVector, YMarginal};
pub use num_complex::Complex64;

/// Formats with 17 significant digits, writing negative zero as zero so
/// output is stable across equivalent computations.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}
