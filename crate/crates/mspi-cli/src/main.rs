//! `mspi` — construction, decoding, trapping-set analysis and Monte Carlo
//! sweeps for two-block CSS codes, from the command line.
//!
//! Every command is a pure function of its flags, input files and seed:
//! repeated invocations produce byte-identical outputs. Exit codes: 0 on
//! success, 1 for reported decode failures under `--strict`, 2 for usage
//! and configuration errors.

mod commands;
mod manifest;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mspi", version, about = "Min-sum with past influence for two-block CSS codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, validate or export a code.
    Code(CodeArgs),
    /// Logical-error-rate sweep over a binary symmetric channel.
    Sim(SimArgs),
    /// Computation-tree trajectories and spectra of symmetric stabilizers.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Decode a single syndrome or error pattern.
    Decode(DecodeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodeAction {
    /// Construct, validate and write the alist pair.
    Build,
    /// Construct and check invariants; no files written.
    Validate,
    /// Write the alist pair only.
    Export,
}

#[derive(Args)]
struct CodeArgs {
    action: CodeAction,
    /// Named preset (bb-72, bb-90, bb-108, bb-144, bb-288) or path to a
    /// code spec file.
    #[arg(long)]
    code: String,
    /// Directory for exported files.
    #[arg(long, default_value = ".")]
    out_dir: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Ms,
    Nms,
    Dms,
    #[value(name = "ms-pi", alias = "nms-pi")]
    MsPi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PiBlockArg {
    Yellow,
    Green,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    X,
    Z,
}

#[derive(Args)]
struct DecoderFlags {
    /// Decoder variant.
    #[arg(long, value_enum, default_value = "ms-pi")]
    variant: VariantArg,
    /// Normalization scalar; defaults to 1 for ms and 0.875 otherwise.
    #[arg(long)]
    beta: Option<f64>,
    /// Maximum number of iterations.
    #[arg(long, default_value_t = 50)]
    iters: usize,
    /// Block the past-influence rule applies to (ms-pi only).
    #[arg(long, value_enum)]
    pi_block: Option<PiBlockArg>,
}

#[derive(Args)]
struct SimArgs {
    /// Named preset or path to a code spec file.
    #[arg(long)]
    code: String,
    #[command(flatten)]
    decoder: DecoderFlags,
    /// Comma-separated crossover probabilities.
    #[arg(long, value_delimiter = ',', required = true)]
    alphas: Vec<f64>,
    /// Trials per alpha.
    #[arg(long)]
    trials: u64,
    /// Master seed for the per-trial streams.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = auto).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Error type to decode.
    #[arg(long, value_enum, default_value = "x")]
    side: SideArg,
    /// Output CSV path; a JSON mirror and a manifest are written next to it.
    #[arg(long)]
    out: String,
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Iterate the message recursions for a (w, 0) stabilizer.
    Recursion(RecursionArgs),
    /// Print the closed-form spectrum of the two-color iteration matrix.
    Eigen(EigenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Ms,
    #[value(name = "ms-pi")]
    MsPi,
}

#[derive(Args)]
struct RecursionArgs {
    /// Stabilizer weight (even, >= 4).
    #[arg(long)]
    w: usize,
    /// Errored yellow nodes.
    #[arg(long)]
    f: usize,
    /// Errored green nodes (0 for the one-color case).
    #[arg(long)]
    g: usize,
    /// Update rule.
    #[arg(long, value_enum, default_value = "ms")]
    rule: RuleArg,
    #[arg(long, default_value_t = 50)]
    iters: usize,
    /// Channel prior; 0 selects the homogeneous system.
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Initial message value.
    #[arg(long, default_value_t = 1.0)]
    init: f64,
    /// Check-message normalization.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Block the past-influence rule applies to (ms-pi only).
    #[arg(long, value_enum)]
    pi_block: Option<PiBlockArg>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct EigenArgs {
    /// Stabilizer weight (even, >= 4).
    #[arg(long)]
    w: usize,
}

#[derive(Args)]
struct DecodeArgs {
    /// Named preset or path to a code spec file.
    #[arg(long)]
    code: String,
    #[command(flatten)]
    decoder: DecoderFlags,
    /// Crossover probability setting the channel prior.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// File of 0/1 characters: the measured syndrome.
    #[arg(long, conflicts_with = "error_file")]
    syndrome_file: Option<String>,
    /// File of 0/1 characters: the true error (syndrome is computed).
    #[arg(long)]
    error_file: Option<String>,
    /// Error type to decode.
    #[arg(long, value_enum, default_value = "x")]
    side: SideArg,
    /// Exit 1 when the syndrome is not matched or a logical error occurs.
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Code(args) => commands::run_code(args),
        Command::Sim(args) => commands::run_sim(args),
        Command::Analyze(AnalyzeCommand::Recursion(args)) => commands::run_recursion(args),
        Command::Analyze(AnalyzeCommand::Eigen(args)) => commands::run_eigen(args),
        Command::Decode(args) => commands::run_decode(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
