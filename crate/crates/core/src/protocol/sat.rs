use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ProtocolError;
use crate::boolnet::{Assignment, BoolNetwork, Form, NetworkError, Source, VarId};
use crate::engines::{continuous_evolve, Drive, EngineError, Trajectory};
use crate::fmt_f64;
use crate::hilbert::{constraint_projector, BasisState, StateError, StateVector, DEFAULT_REGISTER_CAP_BITS};

/// Steps recorded by the sweep. The continuous update is exact, so this only
/// affects trajectory resolution.
pub const DEFAULT_SWEEP_STEPS: usize = 16;

/// Uniform superposition over the free inputs, propagated through the
/// network so every internal and output qubit is consistent.
#[derive(Debug, Clone)]
pub struct PreparedState {
    pub state: StateVector,
    /// Mixing angle: `cos^2 theta` is the weight of the `y = 0` sector.
    pub theta: f64,
    pub y: VarId,
    pub free_inputs: usize,
    /// Free-input assignments with `y = 1`.
    pub solutions: u64,
}

impl PreparedState {
    pub fn p_y1(&self) -> f64 {
        self.theta.sin().powi(2)
    }
}

pub fn prepare_state9(net: &BoolNetwork) -> Result<PreparedState, ProtocolError> {
    if net.form() != Form::Open {
        return Err(NetworkError::WrongForm { expected: Form::Open }.into());
    }
    let y = net.output().ok_or(NetworkError::MissingOutput)?;
    let m = net.free_vars().len();
    if m > DEFAULT_REGISTER_CAP_BITS {
        return Err(StateError::RegisterTooLarge {
            bits: m,
            cap: DEFAULT_REGISTER_CAP_BITS,
        }
        .into());
    }
    let total = 1u64 << m;
    let amp = Complex64::new((total as f64).sqrt().recip(), 0.0);
    let mut solutions = 0;
    let mut entries = Vec::with_capacity(total as usize);
    for index in 0..total {
        let a = net.evaluate_index(index)?;
        if a.get(y) {
            solutions += 1;
        }
        entries.push((BasisState::from_assignment(&a), amp));
    }
    let state = StateVector::from_amplitudes(net.n_vars(), entries)?;
    let theta = (solutions as f64).sqrt().atan2(((total - solutions) as f64).sqrt());
    Ok(PreparedState {
        state,
        theta,
        y,
        free_inputs: m,
        solutions,
    })
}

/// Rotates `y` by pi/2 under continuous measurement of the network's
/// constraint projector, starting from the prepared state.
pub fn sweep(net: &BoolNetwork, prepared: &PreparedState, steps: usize) -> Result<Trajectory, ProtocolError> {
    let p = constraint_projector(net, false)?;
    let drive = Drive::for_angle(prepared.y, 1.0, FRAC_PI_2)?;
    Ok(continuous_evolve(&prepared.state, &p, &drive, steps)?)
}

/// Re-checks a measured basis state classically: the free inputs must
/// propagate to exactly this state, and the output must be 1.
pub fn verify_outcome(net: &BoolNetwork, outcome: &BasisState) -> bool {
    if outcome.len() != net.n_vars() {
        return false;
    }
    let a = outcome.to_assignment();
    let free: Vec<bool> = net.free_vars().iter().map(|&v| a.get(v)).collect();
    match net.evaluate(&free) {
        Ok(propagated) => propagated == a && net.is_solution(&a),
        Err(_) => false,
    }
}

/// Prepares, sweeps, measures every qubit, and verifies the outcome.
pub fn sweep_and_measure<R: Rng + ?Sized>(net: &BoolNetwork, rng: &mut R) -> Result<(BasisState, bool), ProtocolError> {
    let prepared = prepare_state9(net)?;
    let tr = sweep(net, &prepared, DEFAULT_SWEEP_STEPS)?;
    let outcome = tr.last().state.measure_all(rng);
    let ok = verify_outcome(net, &outcome);
    Ok((outcome, ok))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Solved,
    /// No verified outcome within the trial budget. `confidence` is
    /// `1 - (1 - q)^trials` with `q` the exact post-sweep probability of a
    /// verified outcome.
    LikelyUnsat {
        confidence: f64,
    },
    /// The prepared state has no `y = 1` component at all.
    SectorVanishesUnsat,
}

/// What preparation already proves, independent of any measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    Satisfiable,
    Unsatisfiable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepStatus {
    Completed,
    /// Every assignment is a solution, so there is no `y = 0` sector to
    /// rotate into; trials measure the prepared state.
    SkippedNoZeroSector,
    /// The `y = 1` sector is empty; the engine refused the drive.
    RefusedNoOneSector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: u64,
    pub seed: u64,
    pub state: BasisState,
    pub verified: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub max_trials: u64,
    pub seed: u64,
    /// Stop at the first verified outcome. Off, every trial runs and the
    /// frequency estimate is unbiased.
    pub stop_at_first: bool,
}

impl SolveOptions {
    pub fn new(max_trials: u64, seed: u64) -> Self {
        Self {
            max_trials,
            seed,
            stop_at_first: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SatRunReport {
    pub instance: String,
    pub source: Source,
    pub n_vars: usize,
    pub free_inputs: usize,
    pub theta: f64,
    pub prepared_p_y1: f64,
    /// Exact probability that one trial yields a verified outcome.
    pub expected_p_verified: f64,
    pub sweep: SweepStatus,
    pub certificate: Certificate,
    pub seed: u64,
    pub max_trials: u64,
    pub outcomes: Vec<TrialOutcome>,
    pub found: Option<Assignment>,
    pub estimated_p_solution: f64,
    pub verdict: Verdict,
}

impl SatRunReport {
    pub fn trials(&self) -> usize {
        self.outcomes.len()
    }

    pub fn verified_count(&self) -> usize {
        self.outcomes.iter().filter(|o| o.verified).count()
    }

    /// Key-value header followed by the outcome table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let f = fmt_f64;
        let _ = writeln!(s, "instance {}", self.instance);
        let _ = match self.source {
            Source::Native => writeln!(s, "source native"),
            Source::Dimacs { vars, clauses } => writeln!(s, "source dimacs-cnf vars={vars} clauses={clauses}"),
        };
        let _ = writeln!(s, "variables {}", self.n_vars);
        let _ = writeln!(s, "free_inputs {}", self.free_inputs);
        let _ = writeln!(s, "theta {}", f(self.theta));
        let _ = writeln!(s, "prepared_p_y1 {}", f(self.prepared_p_y1));
        let _ = writeln!(
            s,
            "sweep {}",
            match self.sweep {
                SweepStatus::Completed => "completed",
                SweepStatus::SkippedNoZeroSector => "skipped (no y=0 sector: every assignment is a solution)",
                SweepStatus::RefusedNoOneSector => "refused (no y=1 sector)",
            }
        );
        let _ = writeln!(s, "expected_p_verified {}", f(self.expected_p_verified));
        let _ = writeln!(
            s,
            "certificate {}",
            match self.certificate {
                Certificate::Satisfiable => "satisfiable (y=1 sector nonempty at preparation)",
                Certificate::Unsatisfiable => "unsatisfiable (y=1 sector empty at preparation)",
            }
        );
        let _ = writeln!(s, "seed {}", self.seed);
        let _ = writeln!(s, "trial_seed seed xor trial");
        let _ = writeln!(s, "max_trials {}", self.max_trials);
        let _ = writeln!(s, "trials_run {}", self.trials());
        let _ = writeln!(s, "verified {}", self.verified_count());
        let _ = writeln!(s, "estimated_p_solution {}", f(self.estimated_p_solution));
        let _ = match self.verdict {
            Verdict::Solved => writeln!(s, "verdict solved"),
            Verdict::LikelyUnsat { confidence } => writeln!(s, "verdict likely_unsat confidence={}", f(confidence)),
            Verdict::SectorVanishesUnsat => writeln!(s, "verdict sector_vanishes_unsat"),
        };
        match &self.found {
            Some(a) => {
                let _ = writeln!(s, "found {a}");
            }
            None => {
                let _ = writeln!(s, "found none");
            }
        }
        let _ = writeln!(s, "# trial trial_seed outcome verified");
        for o in &self.outcomes {
            let _ = writeln!(s, "{} {} {} {}", o.trial, o.seed, o.state, u8::from(o.verified));
        }
        s
    }
}

/// Runs the measure-and-verify protocol up to `opts.max_trials` times.
///
/// Preparation enumerates the constrained subspace, so satisfiability is
/// already known before any trial; the report carries that as
/// `certificate` next to the protocol's own `verdict`.
pub fn solve_sat(net: &BoolNetwork, name: &str, opts: SolveOptions) -> Result<SatRunReport, ProtocolError> {
    if opts.max_trials == 0 {
        return Err(ProtocolError::InvalidTrials);
    }
    let prepared = prepare_state9(net)?;
    let certificate = if prepared.solutions == 0 {
        Certificate::Unsatisfiable
    } else {
        Certificate::Satisfiable
    };
    let mut report = SatRunReport {
        instance: name.to_string(),
        source: net.source(),
        n_vars: net.n_vars(),
        free_inputs: prepared.free_inputs,
        theta: prepared.theta,
        prepared_p_y1: prepared.p_y1(),
        expected_p_verified: 0.0,
        sweep: SweepStatus::Completed,
        certificate,
        seed: opts.seed,
        max_trials: opts.max_trials,
        outcomes: Vec::new(),
        found: None,
        estimated_p_solution: 0.0,
        verdict: Verdict::SectorVanishesUnsat,
    };

    let final_state = match sweep(net, &prepared, DEFAULT_SWEEP_STEPS) {
        Ok(tr) => tr.last().state.clone(),
        Err(ProtocolError::Engine(EngineError::SectorVanishes(true))) => {
            report.sweep = SweepStatus::RefusedNoOneSector;
            return Ok(report);
        }
        Err(ProtocolError::Engine(EngineError::SectorVanishes(false))) => {
            report.sweep = SweepStatus::SkippedNoZeroSector;
            prepared.state.clone()
        }
        Err(e) => return Err(e),
    };
    report.expected_p_verified = final_state.sector_weight(prepared.y, true)?;

    for trial in 0..opts.max_trials {
        let seed = opts.seed ^ trial;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = final_state.measure_all(&mut rng);
        let verified = verify_outcome(net, &state);
        if verified && report.found.is_none() {
            report.found = Some(state.to_assignment());
        }
        report.outcomes.push(TrialOutcome {
            trial,
            seed,
            state,
            verified,
        });
        if verified && opts.stop_at_first {
            break;
        }
    }
    report.estimated_p_solution = report.verified_count() as f64 / report.trials() as f64;
    report.verdict = if report.found.is_some() {
        Verdict::Solved
    } else {
        Verdict::LikelyUnsat {
            confidence: 1.0 - (1.0 - report.expected_p_verified).powf(report.trials() as f64),
        }
    };
    Ok(report)
}
