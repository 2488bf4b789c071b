use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use qcm_core::boolnet::DEFAULT_VAR_CAP;
use qcm_core::engines::{
    continuous_evolve_with, intermittent_evolve, zeno_convergence_scan, zeno_csv, ContinuousOptions, Drive,
    EngineError, IntermittentMode,
};
use qcm_core::hilbert::constraint_projector;
use qcm_core::protocol::{prepare_state9, simon_demo, solve_sat, ProtocolError, SimonInstance, SolveOptions, Verdict};
use qcm_core::{fmt_f64, BasisState, BoolNetwork, Complex64, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::Instance;
use crate::{DriveArgs, Failure, ModeArg, OracleArgs, SimonArgs, SolveArgs, SweepArgs, ZenoArgs};

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn engine_failure(e: EngineError) -> Failure {
    match e {
        EngineError::SectorVanishes(true) => Failure::Negative(
            "unsatisfiable: the y=1 sector is empty, so no assignment of the free inputs yields y=1 \
             and the drive cannot be followed"
                .into(),
        ),
        EngineError::SectorVanishes(false) => Failure::Negative(
            "the y=0 sector is empty: every assignment is already a solution and there is nothing to sweep".into(),
        ),
        other => input(other),
    }
}

fn protocol_failure(e: ProtocolError) -> Failure {
    match e {
        ProtocolError::Engine(e) => engine_failure(e),
        other => input(other),
    }
}

/// Writes every file, then stdout. Called only after all computation has
/// succeeded.
fn emit(out: Option<&Path>, text: &str, extra: &[(PathBuf, String)]) -> Result<(), Failure> {
    for (path, body) in extra {
        fs::write(path, body).map_err(|e| input(format!("cannot write {}: {e}", path.display())))?;
    }
    match out {
        Some(path) => fs::write(path, text).map_err(|e| input(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(input),
    }
}

fn drive_for(net: &BoolNetwork, d: &DriveArgs) -> Result<Drive, Failure> {
    let y = net.output().ok_or_else(|| input("network has no output"))?;
    Drive::for_angle(y, d.omega, d.angle).map_err(input)
}

pub fn oracle(a: OracleArgs) -> Result<(), Failure> {
    let inst = Instance::load(&a.instance)?;
    let sols = inst.net.brute_force_solutions(DEFAULT_VAR_CAP).map_err(input)?;
    let mut s = format!("# {} solutions over {} variables\n", sols.len(), inst.net.n_vars());
    for sol in &sols {
        let _ = writeln!(s, "{sol}");
    }
    emit(a.out.as_deref(), &s, &[])?;
    if sols.is_empty() {
        return Err(Failure::Negative(format!("{}: unsatisfiable", inst.name)));
    }
    Ok(())
}

/// Comma-separated counts; `a..b` is an inclusive range.
fn parse_steps(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || input(format!("bad step list {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() || out.contains(&0) || out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(input(format!(
            "step list {s:?} must be positive and strictly increasing"
        )));
    }
    Ok(out)
}

pub fn zeno(a: ZenoArgs) -> Result<(), Failure> {
    let inst = Instance::load(&a.instance)?;
    let net = inst.open()?;
    let drive = drive_for(&net, &a.drive)?;
    let p = constraint_projector(&net, false).map_err(input)?;
    let zeros = vec![false; net.free_vars().len()];
    let initial = StateVector::basis(BasisState::from_assignment(&net.evaluate(&zeros).map_err(input)?));

    let text = match a.dt {
        Some(dt) => {
            let mode = match a.mode {
                ModeArg::Ensemble => IntermittentMode::Ensemble,
                ModeArg::Sampled => IntermittentMode::Sampled,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            intermittent_evolve(&initial, &p, &drive, dt, mode, &mut rng)
                .map_err(input)?
                .to_csv()
        }
        None => {
            let steps = parse_steps(&a.steps)?;
            zeno_csv(&zeno_convergence_scan(&initial, &p, &drive, &steps).map_err(input)?)
        }
    };
    emit(a.out.as_deref(), &text, &[])
}

pub fn sweep(a: SweepArgs) -> Result<(), Failure> {
    if a.steps == 0 {
        return Err(input("--steps must be at least 1"));
    }
    let inst = Instance::load(&a.instance)?;
    let net = inst.open()?;
    let drive = drive_for(&net, &a.drive)?;
    let p = constraint_projector(&net, false).map_err(input)?;

    let mut opts = ContinuousOptions::default();
    let initial = if inst.name == "identity" {
        let (phi, delta) = (a.phi.unwrap_or(0.0), a.delta.unwrap_or(0.0));
        let (c, s) = (phi.cos(), phi.sin());
        let phase = Complex64::from_polar(1.0, delta);
        let zero = BasisState::parse("00").expect("literal");
        let one = BasisState::parse("11").expect("literal");
        // a zero-weight sector still needs a direction for the drive to fill
        if s.abs() < 1e-15 {
            opts.empty_sector_seed = Some(StateVector::from_amplitudes(2, [(one.clone(), phase)]).map_err(input)?);
        } else if c.abs() < 1e-15 {
            opts.empty_sector_seed = Some(StateVector::basis(zero.clone()));
        }
        StateVector::from_amplitudes(2, [(zero, Complex64::new(c, 0.0)), (one, phase * s)]).map_err(input)?
    } else {
        if a.phi.is_some() || a.delta.is_some() {
            return Err(input("--phi and --delta apply only to the identity fixture"));
        }
        prepare_state9(&net).map_err(protocol_failure)?.state
    };

    let tr = continuous_evolve_with(&initial, &p, &drive, a.steps, &opts).map_err(engine_failure)?;
    let mut dumps = Vec::new();
    if let Some(prefix) = &a.dump_state {
        let name = |tag: &str| {
            let mut s = prefix.as_os_str().to_owned();
            s.push(format!("_{tag}.txt"));
            PathBuf::from(s)
        };
        dumps.push((name("t0"), tr.points[0].state.dump()));
        dumps.push((name("tT"), tr.last().state.dump()));
    }
    emit(a.out.as_deref(), &tr.to_csv(), &dumps)
}

pub fn solve(a: SolveArgs) -> Result<(), Failure> {
    let inst = Instance::load(&a.instance)?;
    let net = inst.open()?;
    let opts = SolveOptions {
        max_trials: a.trials,
        seed: a.seed,
        stop_at_first: !a.all_trials,
    };
    let report = solve_sat(&net, &inst.name, opts).map_err(input)?;
    emit(a.out.as_deref(), &report.to_text(), &[])?;
    match report.verdict {
        Verdict::Solved => Ok(()),
        Verdict::SectorVanishesUnsat => Err(Failure::Negative(format!(
            "{}: unsatisfiable (certificate: the prepared state has no y=1 component)",
            inst.name
        ))),
        Verdict::LikelyUnsat { confidence } => Err(Failure::Negative(format!(
            "{}: no verified outcome in {} trials (confidence {confidence:.6})",
            inst.name,
            report.trials()
        ))),
    }
}

pub fn simon(a: SimonArgs) -> Result<(), Failure> {
    let inst = SimonInstance::new(a.n, a.p, a.table).map_err(input)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let out = simon_demo(&inst, &mut rng).map_err(input)?;
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let mut s = String::new();
    let _ = writeln!(s, "n {}", inst.n());
    let _ = writeln!(s, "p {}", inst.p());
    let _ = writeln!(s, "table {}", join(inst.table()));
    let _ = writeln!(s, "seed {}", a.seed);
    let _ = writeln!(s, "# prepared");
    s.push_str(&out.prepared.dump());
    let _ = writeln!(s, "k {}", out.k);
    let _ = writeln!(s, "probability {}", fmt_f64(out.probability));
    let _ = writeln!(s, "support {}", join(&out.support));
    let _ = writeln!(s, "amplitudes_equal {}", out.amplitudes_equal);
    let _ = writeln!(s, "# post");
    s.push_str(&out.post.dump());
    emit(a.out.as_deref(), &s, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_lists() {
        assert_eq!(parse_steps("1,2,4").unwrap(), [1, 2, 4]);
        assert_eq!(parse_steps("1..4,8").unwrap(), [1, 2, 3, 4, 8]);
        assert!(parse_steps("0,1").is_err());
        assert!(parse_steps("4,2").is_err());
        assert!(parse_steps("3..1").is_err());
        assert!(parse_steps("x").is_err());
    }
}
