//! Topic segmentation front door.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or validation failure.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hypertile",
    version,
    about = "Deterministic unsupervised topic segmentation for dialogue transcripts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment a JSONL corpus and write boundaries as JSONL
    Segment(commands::segment::SegmentArgs),
    /// Score a hypothesis segmentation against gold boundaries
    Eval(commands::eval::EvalArgs),
    /// Measure per-utterance segmentation latency
    Bench(commands::bench::BenchArgs),
    /// Write per-document gap-score traces as CSV
    Trace(commands::trace::TraceArgs),
    /// Generate a synthetic topic-block corpus
    Synth(commands::synth::SynthArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Segment(args) => commands::segment::run(args),
        Command::Eval(args) => commands::eval::run(args),
        Command::Bench(args) => commands::bench::run(args),
        Command::Trace(args) => commands::trace::run(args),
        Command::Synth(args) => commands::synth::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            // Every error variant's Display already includes its cause.
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
