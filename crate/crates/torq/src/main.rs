//! Thin command-line front end over the library. Exit codes: 0 success,
//! 1 usage or parse errors, 2 mathematically invalid input (unfaithful
//! without --effectivize, not 1-modular), 3 internal invariant violation
//! or failed oracle check.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use torq::error::Error;
use torq::report::{
    cmd_analyze, cmd_check, cmd_hilbert, cmd_iso, cmd_reduce, render_text, InputDocument,
};

#[derive(Parser)]
#[command(
    name = "torq",
    about = "Analyze, reduce, and classify complex symplectic quotients of torus representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Faithfulness, modularity, stability, type-O slices, strata.
    Analyze {
        input: PathBuf,
        /// Replace an unfaithful action by its image torus before analysis.
        #[arg(long)]
        effectivize: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the reduction recipe to minimal data with a full trace.
    Reduce {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide isomorphism of the quotients of two inputs.
    Iso {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Truncated Hilbert series of the ambient, shell, and reduced rings.
    Hilbert {
        input: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Full oracle battery; exits nonzero on any disagreement.
    Check {
        input: PathBuf,
        /// Seed for sampling and scrambles (defaults to 0 unless
        /// --deterministic insists on an explicit value).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        /// Refuse a defaulted seed; for CI use.
        #[arg(long)]
        deterministic: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn load(path: &Path) -> Result<InputDocument, String> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&raw).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn emit<T: Serialize>(report: &T, format: Format) {
    let value = serde_json::to_value(report).expect("reports serialize");
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(report).expect("reports serialize")
            );
        }
        Format::Text => print!("{}", render_text(&value)),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NotFaithful(_)
        | Error::NotOneModular { .. }
        | Error::NotStable { .. }
        | Error::DisconnectedReduction(_) => 2,
        Error::InvariantViolation(_) => 3,
        _ => 1,
    }
}

fn run() -> Result<u8, (u8, String)> {
    let cli = Cli::try_parse().map_err(|e| (1u8, e.to_string()))?;
    let math = |e: Error| (exit_code_for(&e), format!("error: {e}"));
    match cli.command {
        Command::Analyze {
            input,
            effectivize,
            format,
        } => {
            let doc = load(&input).map_err(|m| (1, m))?;
            let report = cmd_analyze(&doc, effectivize).map_err(math)?;
            emit(&report, format);
            Ok(0)
        }
        Command::Reduce { input, format } => {
            let doc = load(&input).map_err(|m| (1, m))?;
            let report = cmd_reduce(&doc).map_err(math)?;
            emit(&report, format);
            Ok(0)
        }
        Command::Iso {
            left,
            right,
            format,
        } => {
            let l = load(&left).map_err(|m| (1, m))?;
            let r = load(&right).map_err(|m| (1, m))?;
            let report = cmd_iso(&l, &r).map_err(math)?;
            emit(&report, format);
            Ok(0)
        }
        Command::Hilbert {
            input,
            max_degree,
            format,
        } => {
            let doc = load(&input).map_err(|m| (1, m))?;
            let report = cmd_hilbert(&doc, max_degree).map_err(math)?;
            emit(&report, format);
            Ok(0)
        }
        Command::Check {
            input,
            seed,
            samples,
            max_degree,
            deterministic,
            format,
        } => {
            if deterministic && seed.is_none() {
                return Err((1, "--deterministic requires an explicit --seed".into()));
            }
            let doc = load(&input).map_err(|m| (1, m))?;
            let report =
                cmd_check(&doc, seed.unwrap_or(0), samples, max_degree).map_err(math)?;
            let ok = report.passed;
            emit(&report, format);
            Ok(if ok { 0 } else { 3 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("{message}");
            ExitCode::from(code)
        }
    }
}
