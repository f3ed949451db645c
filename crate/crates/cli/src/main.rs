//! `spinretro`: command-line front end.
//!
//! Exit codes: 0 success, 1 domain failure (violations, infeasible input,
//! audit findings), 2 usage or parse error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinretro::protocol::DEFAULT_SEED;

use output::{Format, Out};

#[derive(Parser, Debug)]
#[command(name = "spinretro", version, about = "Build, check and simulate spin-measurement retrodiction protocols")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output style: readable text or one JSON record per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every axis, outcome and basis vector against the table.
    Verify {
        #[command(flatten)]
        source: ProtocolSource,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Seeded Monte Carlo rounds, compared with the exact distribution.
    /// Runs the `vaa` builtin when no protocol is named.
    Simulate {
        #[command(flatten)]
        source: ProtocolSource,
        /// Number of rounds.
        #[arg(short = 'n', long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Cells further than this many binomial deviations are flagged.
        #[arg(long, default_value_t = 5.0)]
        sigmas: f64,
        /// Print every round.
        #[arg(long)]
        trace: bool,
    },
    /// Run or check gate networks.
    Circuit {
        #[command(subcommand)]
        action: CircuitAction,
    },
    /// Solve the constraint system and build Alice's basis.
    Construct(ConstructArgs),
    /// Recompute every relation the published protocols must satisfy.
    Audit {
        /// Builtin to audit; all four when omitted.
        #[arg(long)]
        builtin: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Print the look-up table.
    Table {
        #[command(flatten)]
        source: ProtocolSource,
    },
    /// Write a protocol in the protocol file format.
    Export {
        #[command(flatten)]
        source: ProtocolSource,
        /// Destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension of the post-measurement states and the outcome lower bound.
    Rank {
        #[command(flatten)]
        source: ProtocolSource,
    },
}

#[derive(Subcommand, Debug)]
enum CircuitAction {
    /// Print the amplitudes a circuit produces.
    Run {
        #[command(flatten)]
        source: CircuitSource,
        /// Input computational state, e.g. `00`.
        #[arg(long)]
        input: Option<String>,
        #[arg(long, value_enum, default_value_t = Segment::All)]
        segment: Segment,
    },
    /// Check the preparation and measurement halves of a network.
    Check {
        #[command(flatten)]
        source: CircuitSource,
        /// Protocol the circuit should implement (builtin name or file);
        /// required for circuit files.
        #[arg(long)]
        protocol: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Segment {
    All,
    Prep,
    Meas,
}

#[derive(Args, Debug)]
struct CircuitSource {
    /// Circuit file.
    path: Option<PathBuf>,
    /// `vaa-network` or `singlet-network`.
    #[arg(long, conflicts_with = "path")]
    builtin: Option<String>,
}

#[derive(Args, Debug)]
struct ProtocolSource {
    /// Protocol file.
    path: Option<PathBuf>,
    /// `vaa`, `singlet`, `m4-symmetric` or `m3-nonorthogonal`.
    #[arg(long, conflicts_with = "path")]
    builtin: Option<String>,
    /// Use the published table or the one the state and basis imply.
    #[arg(long, value_enum, default_value_t = TableChoice::Printed)]
    table: TableChoice,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TableChoice {
    Printed,
    Implied,
}

#[derive(Args, Debug, Clone, Copy)]
struct TolArgs {
    /// Tolerance for composite checks.
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
    /// Probability above which an outcome counts as reachable.
    #[arg(long, value_parser = positive)]
    floor: Option<f64>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// Construction input file (rows plus axes or Gram matrix).
    input: Option<PathBuf>,
    /// Symmetric request with this many axes.
    #[arg(long, conflicts_with = "input")]
    symmetric: Option<usize>,
    /// Four-axis family: b_5 (with --b6).
    #[arg(long, requires = "b6", conflicts_with_all = ["input", "symmetric"])]
    b5: Option<f64>,
    /// Four-axis family: b_6 (with --b5).
    #[arg(long, requires = "b5")]
    b6: Option<f64>,
    /// Eigenspace rotation parameters for σ_z = +1, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta_plus: Option<Vec<f64>>,
    /// Eigenspace rotation parameters for σ_z = -1, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta_minus: Option<Vec<f64>>,
    /// Overall phase of the σ_z = +1 rotation. Both rotations must agree.
    #[arg(long, allow_hyphen_values = true)]
    lambda_plus: Option<f64>,
    /// Overall phase of the σ_z = -1 rotation.
    #[arg(long, allow_hyphen_values = true)]
    lambda_minus: Option<f64>,
    /// Diff against a published basis (only `m4`).
    #[arg(long)]
    compare_paper: Option<String>,
    /// Write the constructed protocol to this file.
    #[arg(long)]
    emit_protocol: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{s} must be positive"))
    }
}

/// A message and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<spinretro::Error> for Failure {
    fn from(e: spinretro::Error) -> Self {
        let code = match e {
            spinretro::Error::Parse { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new(cli.format);
    let result = match cli.command {
        Command::Verify { source, tol } => commands::verify(&mut out, &source, tol),
        Command::Simulate {
            source,
            trials,
            seed,
            sigmas,
            trace,
        } => commands::simulate(&mut out, &source, trials, seed, sigmas, trace),
        Command::Circuit { action } => match action {
            CircuitAction::Run {
                source,
                input,
                segment,
            } => commands::circuit_run(&mut out, &source, input.as_deref(), segment),
            CircuitAction::Check {
                source,
                protocol,
                tol,
            } => commands::circuit_check(&mut out, &source, protocol.as_deref(), tol),
        },
        Command::Construct(args) => commands::construct(&mut out, &args),
        Command::Audit { builtin, tol } => commands::audit(&mut out, builtin.as_deref(), tol),
        Command::Table { source } => commands::table(&mut out, &source),
        Command::Export { source, out: dest } => commands::export(&mut out, &source, dest.as_deref()),
        Command::Rank { source } => commands::rank(&mut out, &source),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
