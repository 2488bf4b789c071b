//! `qcm`: command-line harness for the measurement simulator.
//!
//! Exit codes: 0 success, 1 domain-negative result (unsatisfiable, or a
//! sector that cannot be driven), 2 usage or input error.

mod commands;
mod instance;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "qcm", version, about = "Computation by continuous incomplete measurement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every solution by exhaustive search.
    Oracle(OracleArgs),
    /// Intermittent measurement: survival scan over step counts, or one
    /// trajectory with --dt.
    Zeno(ZenoArgs),
    /// Continuous measurement trajectory.
    Sweep(SweepArgs),
    /// Prepare, sweep, measure and verify until a solution is found.
    Solve(SolveArgs),
    /// Measure the value register of a periodic function.
    Simon(SimonArgs),
}

#[derive(Args)]
struct OracleArgs {
    /// Fixture name or network file.
    instance: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DriveArgs {
    /// Rotation rate of the output qubit.
    #[arg(long, default_value = "1")]
    omega: f64,
    /// Total rotation angle; accepts numbers and forms like `pi/2`.
    #[arg(long, default_value = "pi/2", value_parser = parse_angle)]
    angle: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ensemble,
    Sampled,
}

#[derive(Args)]
struct ZenoArgs {
    instance: String,
    #[command(flatten)]
    drive: DriveArgs,
    /// Step counts, comma separated; `a..b` expands to an inclusive range.
    #[arg(long, default_value = "1,2,4,8,16,32,64,128,256,512,1024")]
    steps: String,
    /// Emit a single trajectory with this measurement interval instead.
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, value_enum, default_value = "ensemble")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    instance: String,
    #[command(flatten)]
    drive: DriveArgs,
    /// Recorded intervals; the update is exact, so this sets resolution only.
    #[arg(long, default_value_t = 16)]
    steps: usize,
    /// Initial mixing angle for the `identity` fixture.
    #[arg(long)]
    phi: Option<f64>,
    /// Relative phase of the `11` term for the `identity` fixture.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write `<PREFIX>_t0.txt` and `<PREFIX>_tT.txt` state dumps.
    #[arg(long, value_name = "PREFIX")]
    dump_state: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: String,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run every trial instead of stopping at the first verified outcome.
    #[arg(long)]
    all_trials: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimonArgs {
    /// Width of the argument register.
    #[arg(long)]
    n: usize,
    /// Period.
    #[arg(long)]
    p: u64,
    /// Function values for arguments 0..2p, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    table: Vec<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let value = if let Some(rest) = t.strip_prefix("pi") {
        let rest = rest.trim();
        if rest.is_empty() {
            std::f64::consts::PI
        } else if let Some(d) = rest.strip_prefix('/') {
            let d: f64 = d.trim().parse().map_err(|_| format!("bad angle {s}"))?;
            std::f64::consts::PI / d
        } else {
            return Err(format!("bad angle {s}"));
        }
    } else if let Some(k) = t.strip_suffix("pi") {
        let k = k.trim().trim_end_matches('*');
        k.trim().parse::<f64>().map_err(|_| format!("bad angle {s}"))? * std::f64::consts::PI
    } else {
        t.parse().map_err(|_| format!("bad angle {s}"))?
    };
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(format!("angle must be finite and non-negative, got {s}"))
    }
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// The computation ran and the answer is negative.
    Negative(String),
    Input(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Oracle(a) => commands::oracle(a),
        Command::Zeno(a) => commands::zeno(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Solve(a) => commands::solve(a),
        Command::Simon(a) => commands::simon(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
