//! `phin`: batch front end for the phin-core engine.
//!
//! Every subcommand prints one report to stdout as a table (default), JSON
//! or CSV. Exit status is 0 on success, 1 when a check fails or a
//! certificate is rejected, and 2 on usage errors.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use commands::Report;

#[derive(Parser)]
#[command(
    name = "phin",
    version,
    about = "Exact mode algebra, Gram, character and certificate computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure polynomial Π(m) and Π(m)/m for one mode.
    Pi(PiArgs),
    /// Exact Gram matrix of one Fock level.
    Gram(GramArgs),
    /// Rank and null-vector basis of one level.
    Nulls(LevelArgs),
    /// Partition numbers and the reduced L₀ character, optionally eta.
    Character(CharacterArgs),
    /// Mode energy bounds on every level up to a cutoff.
    Bounds(BoundsArgs),
    /// Differential-operator kernel identities and mode commutators.
    KernelCheck(KernelArgs),
    /// Small-β behaviour of p(e^-β) exp(-(β₀/β)^k).
    Nuclearity(NuclearityArgs),
    /// Certificate deciding whether a stress-energy tensor can exist.
    Certify(CertifyArgs),
    /// Replay a certificate produced by `certify`.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
pub struct PiArgs {
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub mode: i64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct GramArgs {
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    #[arg(long)]
    pub level: u32,
    /// Value of the central mode a₀, as an integer, decimal or p/q.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub q: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct LevelArgs {
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    #[arg(long)]
    pub level: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct CharacterArgs {
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    /// Highest level N of the series.
    #[arg(long, default_value_t = 12)]
    pub level: u32,
    /// Also compare each coefficient with the Gram rank of its level.
    #[arg(long)]
    pub check_ranks: bool,
    /// Evaluate η(iβ/2π) and the modular law at this β.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Decimal digits for eta evaluation.
    #[arg(long, default_value_t = 30)]
    pub precision: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    /// Highest mode index checked.
    #[arg(long, default_value_t = 4)]
    pub mode: i64,
    /// Highest level checked.
    #[arg(long, default_value_t = 6)]
    pub level: u32,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct KernelArgs {
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    /// Mode commutators are compared for |m|, |m'| up to this bound.
    #[arg(long, default_value_t = 10)]
    pub mode: i64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct NuclearityArgs {
    #[arg(long, default_value_t = 1.70)]
    pub beta0: f64,
    #[arg(long, default_value_t = 1)]
    pub n_exp: u32,
    /// `start:end:count` (geometric) or a comma-separated decreasing list.
    #[arg(long, default_value = "0.5:0.02:25")]
    pub beta_grid: String,
    #[arg(long, default_value_t = 30)]
    pub precision: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub degree: u32,
    /// Also test (m, -m) constraints for 2 ≤ m ≤ this bound.
    #[arg(long)]
    pub sweep_mode: Option<i64>,
    /// Witness levels for the sweep.
    #[arg(long, default_value_t = 3)]
    pub sweep_level: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Certificate file, or `-` for stdin. Accepts a bare certificate or
    /// the JSON report of `certify`.
    pub input: String,
    #[command(flatten)]
    output: OutputArgs,
}

/// Why a run did not succeed.
pub enum Failure {
    Usage(String),
    /// The report was printed but records a failed check.
    Check,
}

impl From<phin_core::Error> for Failure {
    fn from(e: phin_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(report: &Report, format: Format) -> Result<(), Failure> {
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.envelope())
                .map_err(|e| Failure::Usage(format!("serialization failed: {e}")))?;
            s.push('\n');
            s
        }
        Format::Table => report.table.clone(),
        Format::Csv => report.csv.clone().ok_or_else(|| {
            Failure::Usage(format!(
                "csv output is not available for `{}`",
                report.command
            ))
        })?,
    };
    let mut out = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, result) = match cli.command {
        Command::Pi(a) => (a.output.format, commands::pi(&a, a.output.format)),
        Command::Gram(a) => (a.output.format, commands::gram(&a, a.output.format)),
        Command::Nulls(a) => (a.output.format, commands::nulls(&a, a.output.format)),
        Command::Character(a) => (a.output.format, commands::character(&a, a.output.format)),
        Command::Bounds(a) => (a.output.format, commands::bounds(&a, a.output.format)),
        Command::KernelCheck(a) => (a.output.format, commands::kernel_check(&a, a.output.format)),
        Command::Nuclearity(a) => (a.output.format, commands::nuclearity(&a, a.output.format)),
        Command::Certify(a) => (a.output.format, commands::certify(&a, a.output.format)),
        Command::Verify(a) => (a.output.format, commands::verify(&a, a.output.format)),
    };
    let outcome = result.and_then(|report| {
        emit(&report, format)?;
        if report.ok {
            Ok(())
        } else {
            Err(Failure::Check)
        }
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
