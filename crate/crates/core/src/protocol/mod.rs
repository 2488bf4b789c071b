//! End-to-end experiments: the measure-and-verify satisfiability protocol,
//! random instance generators and the periodic-function branch demo.

mod instances;
mod sat;
mod simon;

pub use instances::{random_loop_network, random_open_network, OpenShape};
pub use sat::{
    prepare_state9, solve_sat, sweep, sweep_and_measure, verify_outcome, Certificate, PreparedState, SatRunReport,
    SolveOptions, SweepStatus, TrialOutcome, Verdict, DEFAULT_SWEEP_STEPS,
};
pub use simon::{simon_branch, simon_branches, simon_demo, SimonInstance, SimonOutcome, AMPLITUDE_TOL};

use thiserror::Error;

use crate::boolnet::NetworkError;
use crate::engines::EngineError;
use crate::hilbert::StateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("invalid periodic function: {0}")]
    InvalidSimon(String),
    #[error("trial budget must be at least 1")]
    InvalidTrials,
}
