//! Evolution laws for a register whose output qubit is rotated while the
//! constraint projector is measured.
//!
//! * [`intermittent_evolve`] rotates for `dt`, then measures the projector,
//!   and repeats. The state freezes (Zeno effect) and the constraint is
//!   violated between measurements.
//! * [`continuous_evolve`] keeps the state inside the constrained subspace
//!   at every instant while forcing the output marginal to follow the drive.
//!   Of all such states it picks the one nearest the previous state, which
//!   rescales each output sector as a whole and keeps every amplitude ratio
//!   within a sector fixed.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::boolnet::VarId;
use crate::fmt_f64;
use crate::hilbert::{BasisState, DiagonalProjector, StateError, StateVector, YMarginal};

/// Tolerance for treating an initial state as inside the subspace, and for
/// treating a sector as empty.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("initial state leaves the constrained subspace (violation norm {0:e})")]
    NonMemberInitialState(f64),
    #[error("the y={} sector is empty but the drive assigns it weight", u8::from(*.0))]
    SectorVanishes(bool),
    #[error("target marginal angle {0} leaves [0, pi]")]
    MarginalOutOfRange(f64),
    #[error("invalid drive: {0}")]
    InvalidDrive(String),
    #[error("interval {dt} does not divide duration {duration}")]
    InvalidInterval { dt: f64, duration: f64 },
    #[error("step count must be at least 1")]
    InvalidSteps,
    #[error("invalid sector seed: {0}")]
    InvalidSeed(String),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Rotation of the output qubit at rate `omega` for `duration`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    pub y: VarId,
    pub omega: f64,
    pub duration: f64,
}

impl Drive {
    pub fn new(y: VarId, omega: f64, duration: f64) -> Result<Self, EngineError> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(EngineError::InvalidDrive(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(EngineError::InvalidDrive(format!(
                "duration must be non-negative, got {duration}"
            )));
        }
        Ok(Self { y, omega, duration })
    }

    /// A drive that sweeps `angle` radians in total.
    pub fn for_angle(y: VarId, omega: f64, angle: f64) -> Result<Self, EngineError> {
        Self::new(y, omega, angle / omega)
    }

    pub fn total_angle(&self) -> f64 {
        self.omega * self.duration
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: StateVector,
    pub marginal: YMarginal,
    /// Probability that every measurement so far found the state inside the
    /// subspace. Always 1 for the continuous engine.
    pub survival_so_far: f64,
    /// `||(1 - P) psi||` at this instant.
    pub violation_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntermittentMode {
    /// Follow the in-subspace branch, weighting it by its probability.
    Ensemble,
    /// Draw each measurement outcome; stop on the first violation.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryMode {
    Intermittent { dt: f64, mode: IntermittentMode },
    Continuous { steps: usize },
}

/// Which instants get recorded besides step boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Recording {
    pub midpoints: bool,
}

impl Default for Recording {
    fn default() -> Self {
        Self { midpoints: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub mode: TrajectoryMode,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryPoint {
        self.points.last().expect("trajectories start with the initial point")
    }

    /// `t,survival,p0,p1,violation_norm`, one row per point, 17 significant
    /// digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,survival,p0,p1,violation_norm\n");
        for p in &self.points {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                fmt_f64(p.t),
                fmt_f64(p.survival_so_far),
                fmt_f64(p.marginal.p0),
                fmt_f64(p.marginal.p1),
                fmt_f64(p.violation_norm)
            );
        }
        s
    }
}

fn point(
    t: f64,
    state: StateVector,
    y: VarId,
    p: &DiagonalProjector,
    survival: f64,
) -> Result<TrajectoryPoint, EngineError> {
    Ok(TrajectoryPoint {
        t,
        marginal: state.y_marginal(y)?,
        violation_norm: state.violation_norm(p)?,
        state,
        survival_so_far: survival,
    })
}

fn check_member(initial: &StateVector, p: &DiagonalProjector) -> Result<(), EngineError> {
    let v = initial.violation_norm(p)?;
    if v > MEMBERSHIP_TOL {
        return Err(EngineError::NonMemberInitialState(v));
    }
    Ok(())
}

/// Number of `dt` intervals in `duration`; `dt` must divide it within 1e-9.
pub fn interval_count(duration: f64, dt: f64) -> Result<usize, EngineError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(EngineError::InvalidInterval { dt, duration });
    }
    let n = (duration / dt).round();
    if (n * dt - duration).abs() > 1e-9 {
        return Err(EngineError::InvalidInterval { dt, duration });
    }
    Ok(n as usize)
}

pub fn intermittent_evolve<R: Rng + ?Sized>(
    initial: &StateVector,
    p: &DiagonalProjector,
    drive: &Drive,
    dt: f64,
    mode: IntermittentMode,
    rng: &mut R,
) -> Result<Trajectory, EngineError> {
    intermittent_evolve_with(initial, p, drive, dt, mode, rng, Recording::default())
}

/// Rotate by `omega * dt`, measure the projector, repeat.
///
/// In ensemble mode a measurement that cannot succeed ends the trajectory
/// with survival 0; the in-subspace state is left at its last value, which
/// is the limit of the renormalized branch as the survival goes to 0.
pub fn intermittent_evolve_with<R: Rng + ?Sized>(
    initial: &StateVector,
    p: &DiagonalProjector,
    drive: &Drive,
    dt: f64,
    mode: IntermittentMode,
    rng: &mut R,
    rec: Recording,
) -> Result<Trajectory, EngineError> {
    check_member(initial, p)?;
    let steps = interval_count(drive.duration, dt)?;
    let y = drive.y;
    let step_angle = drive.omega * dt;

    let mut points = vec![point(0.0, initial.clone(), y, p, 1.0)?];
    let mut state = initial.clone();
    let mut survival = 1.0;

    for k in 0..steps {
        let t0 = k as f64 * dt;
        if rec.midpoints {
            let mid = state.rotate_y(y, 0.5 * step_angle)?;
            points.push(point(t0 + 0.5 * dt, mid, y, p, survival)?);
        }
        let t1 = (k + 1) as f64 * dt;
        let rotated = state.rotate_y(y, step_angle)?;
        let step_survival = rotated.weight_in(p)?;

        let passed = match mode {
            IntermittentMode::Ensemble => true,
            IntermittentMode::Sampled => rng.random::<f64>() < step_survival,
        };
        if !passed {
            let (failed, _) = rotated.project_complement(p)?;
            points.push(point(t1, failed, y, p, 0.0)?);
            break;
        }
        survival *= step_survival;
        match rotated.project(p) {
            Ok((kept, _)) => {
                state = kept;
                points.push(point(t1, state.clone(), y, p, survival)?);
            }
            Err(StateError::ZeroSurvival) => {
                points.push(point(t1, state.clone(), y, p, 0.0)?);
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }

    Ok(Trajectory {
        points,
        mode: TrajectoryMode::Intermittent { dt, mode },
    })
}

/// The continuous-measurement law for one initial state.
///
/// The initial state is split into its `y = 0` and `y = 1` parts; their
/// directions are frozen and only their lengths follow the drive. At target
/// angle `phi` the state is `|cos phi| a + |sin phi| b`, which is the
/// subspace state with marginal `(cos^2 phi, sin^2 phi)` nearest to any
/// earlier state on the same path.
#[derive(Debug, Clone)]
pub struct SectorRescaling {
    n_qubits: usize,
    y: VarId,
    phi0: f64,
    zero_dir: Option<BTreeMap<BasisState, Complex64>>,
    one_dir: Option<BTreeMap<BasisState, Complex64>>,
}

fn direction(part: BTreeMap<BasisState, Complex64>) -> Option<BTreeMap<BasisState, Complex64>> {
    let norm = part.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm <= MEMBERSHIP_TOL {
        return None;
    }
    Some(part.into_iter().map(|(b, a)| (b, a / norm)).collect())
}

impl SectorRescaling {
    /// `seed` supplies the direction of a sector that is empty in `initial`.
    /// It must lie in the subspace and entirely in that sector.
    pub fn new(
        initial: &StateVector,
        p: &DiagonalProjector,
        y: VarId,
        seed: Option<&StateVector>,
    ) -> Result<Self, EngineError> {
        check_member(initial, p)?;
        let zero: BTreeMap<_, _> = initial
            .iter()
            .filter(|(b, _)| !b.get(y))
            .map(|(b, a)| (b.clone(), *a))
            .collect();
        let one: BTreeMap<_, _> = initial
            .iter()
            .filter(|(b, _)| b.get(y))
            .map(|(b, a)| (b.clone(), *a))
            .collect();
        let (n0, n1) = (
            zero.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt(),
            one.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt(),
        );
        let phi0 = n1.atan2(n0);
        let mut zero_dir = direction(zero);
        let mut one_dir = direction(one);

        if let Some(seed) = seed {
            check_member(seed, p).map_err(|_| EngineError::InvalidSeed("seed leaves the subspace".into()))?;
            let bits: Vec<bool> = seed.support().map(|b| b.get(y)).collect();
            let sector = bits[0];
            if bits.iter().any(|&b| b != sector) {
                return Err(EngineError::InvalidSeed("seed spans both sectors".into()));
            }
            let slot = if sector { &mut one_dir } else { &mut zero_dir };
            if slot.is_some() {
                return Err(EngineError::InvalidSeed(format!(
                    "y={} sector is not empty",
                    u8::from(sector)
                )));
            }
            *slot = direction(seed.iter().map(|(b, a)| (b.clone(), *a)).collect());
        }

        Ok(Self {
            n_qubits: initial.n_qubits(),
            y,
            phi0,
            zero_dir,
            one_dir,
        })
    }

    /// Marginal angle of the initial state: `sin^2 phi0 = p1`.
    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn y(&self) -> VarId {
        self.y
    }

    /// Checks that the drive can be followed from this initial state.
    pub fn check_drive(&self, drive: &Drive) -> Result<(), EngineError> {
        let end = self.phi0 + drive.total_angle();
        if end > PI + MEMBERSHIP_TOL {
            return Err(EngineError::MarginalOutOfRange(end));
        }
        if drive.total_angle() > 0.0 {
            // phi sweeps [phi0, end]; an empty sector is fatal once it is
            // asked to carry weight anywhere on that range
            if self.zero_dir.is_none() {
                return Err(EngineError::SectorVanishes(false));
            }
            if self.one_dir.is_none() && end > 0.0 {
                return Err(EngineError::SectorVanishes(true));
            }
        }
        Ok(())
    }

    /// The state at target marginal angle `phi`.
    pub fn state_at_angle(&self, phi: f64) -> Result<StateVector, EngineError> {
        if !(-MEMBERSHIP_TOL..=PI + MEMBERSHIP_TOL).contains(&phi) {
            return Err(EngineError::MarginalOutOfRange(phi));
        }
        let (c, s) = (phi.cos().abs(), phi.sin().abs());
        let mut amps = BTreeMap::new();
        for (dir, scale, sector) in [(&self.zero_dir, c, false), (&self.one_dir, s, true)] {
            match dir {
                Some(d) => amps.extend(d.iter().map(|(b, a)| (b.clone(), a * scale))),
                None if scale > MEMBERSHIP_TOL => return Err(EngineError::SectorVanishes(sector)),
                None => {}
            }
        }
        Ok(StateVector::from_normalized_map(self.n_qubits, amps))
    }
}

pub fn continuous_evolve(
    initial: &StateVector,
    p: &DiagonalProjector,
    drive: &Drive,
    steps: usize,
) -> Result<Trajectory, EngineError> {
    continuous_evolve_with(initial, p, drive, steps, &ContinuousOptions::default())
}

#[derive(Debug, Clone, Default)]
pub struct ContinuousOptions {
    pub recording: Recording,
    /// Direction given to an initially empty output sector. Without it an
    /// empty sector that the drive would fill is an error.
    pub empty_sector_seed: Option<StateVector>,
}

/// Evolves under continuous measurement, recording `steps` equal intervals.
/// The update is exact, so the recorded states do not depend on `steps`.
pub fn continuous_evolve_with(
    initial: &StateVector,
    p: &DiagonalProjector,
    drive: &Drive,
    steps: usize,
    opts: &ContinuousOptions,
) -> Result<Trajectory, EngineError> {
    if steps == 0 {
        return Err(EngineError::InvalidSteps);
    }
    let law = SectorRescaling::new(initial, p, drive.y, opts.empty_sector_seed.as_ref())?;
    law.check_drive(drive)?;

    let y = drive.y;
    let mut points = vec![point(0.0, initial.clone(), y, p, 1.0)?];
    if drive.duration > 0.0 {
        let at = |t: f64| -> Result<TrajectoryPoint, EngineError> {
            let state = law.state_at_angle(law.phi0() + drive.omega * t)?;
            point(t, state, y, p, 1.0)
        };
        for k in 0..steps {
            if opts.recording.midpoints {
                points.push(at(drive.duration * (k as f64 + 0.5) / steps as f64)?);
            }
            points.push(at(drive.duration * (k + 1) as f64 / steps as f64)?);
        }
    }
    Ok(Trajectory {
        points,
        mode: TrajectoryMode::Continuous { steps },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoRow {
    pub steps: usize,
    pub survival: f64,
    /// `|<initial|final>|^2` of the in-subspace branch.
    pub fidelity: f64,
}

/// One ensemble intermittent run per step count, each splitting the drive
/// into that many equal intervals.
pub fn zeno_convergence_scan(
    initial: &StateVector,
    p: &DiagonalProjector,
    drive: &Drive,
    step_counts: &[usize],
) -> Result<Vec<ZenoRow>, EngineError> {
    if step_counts.is_empty() || step_counts.contains(&0) || step_counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EngineError::InvalidSteps);
    }
    // ensemble mode draws nothing; any generator will do
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    step_counts
        .iter()
        .map(|&n| {
            let dt = drive.duration / n as f64;
            let tr = intermittent_evolve_with(
                initial,
                p,
                drive,
                dt,
                IntermittentMode::Ensemble,
                &mut rng,
                Recording { midpoints: false },
            )?;
            let last = tr.last();
            Ok(ZenoRow {
                steps: n,
                survival: last.survival_so_far,
                fidelity: initial.fidelity(&last.state),
            })
        })
        .collect()
}

/// `N,survival,fidelity`
pub fn zeno_csv(rows: &[ZenoRow]) -> String {
    let mut s = String::from("N,survival,fidelity\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", r.steps, fmt_f64(r.survival), fmt_f64(r.fidelity));
    }
    s
}
