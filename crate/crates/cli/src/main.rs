//! `certsynth`: certifying synthesis for distributed reactive systems.

mod commands;
mod solution_dir;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use certsynth::encoding::Mode;
use certsynth::synthesis::SchedulePolicy;

/// Exit codes shared by all commands.
pub mod exit {
    pub const OK: u8 = 0;
    pub const UNREALIZABLE: u8 = 1;
    pub const ERROR: u8 = 2;
    pub const VERIFY_FAILED: u8 = 3;
    pub const UNKNOWN: u8 = 4;
}

#[derive(Parser)]
#[command(name = "certsynth", version, about = "Compositional synthesis with guarantee certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Moore,
    Mealy,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Moore => Mode::Moore,
            ModeArg::Mealy => Mode::Mealy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    CertificateFirst,
    StrategyFirst,
}

impl From<ScheduleArg> for SchedulePolicy {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::CertificateFirst => SchedulePolicy::CertificateFirst,
            ScheduleArg::StrategyFirst => SchedulePolicy::StrategyFirst,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Json,
    Both,
}

/// Options shared by `synth` and `bench`.
#[derive(clap::Args)]
pub struct SynthArgs {
    /// Largest strategy size tried.
    #[arg(long, default_value_t = 4)]
    max_strategy: usize,
    /// Largest certificate size tried.
    #[arg(long = "max-cert", default_value_t = 4)]
    max_cert: usize,
    #[arg(long, value_enum, default_value = "moore")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "certificate-first")]
    schedule: ScheduleArg,
    /// `builtin` or the path of a DIMACS solver executable.
    #[arg(long, default_value = "builtin")]
    solver: String,
    /// Per-call solver timeout in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Write every generated CNF and its variable map here.
    #[arg(long)]
    emit_dimacs: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize strategies and certificates.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        args: SynthArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check a solution directory against a specification.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Print subspecifications and relevant processes.
    Decompose {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Generate a benchmark instance, synthesize it and print a timing row.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long)]
        param: String,
        #[command(flatten)]
        args: SynthArgs,
        /// Also keep the generated specification and the solution.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Synth { spec, args, out, format } => commands::synth(&spec, &args, &out, format),
        Command::Verify { spec, solution } => commands::verify(&spec, &solution),
        Command::Decompose { spec } => commands::decompose(&spec),
        Command::Bench { family, param, args, out } => commands::bench(&family, &param, &args, out.as_deref()),
    };
    ExitCode::from(code)
}
