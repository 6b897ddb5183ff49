//! `khop` command-line driver: sampling runs, oracle verification,
//! benchmarks, partitioning and format export.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O or input format
//! error, 3 failed check or invariant violation.

pub mod commands;
pub mod config;
mod error;
mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use commands::{cmd_bench, cmd_export, cmd_partition, cmd_sample, cmd_verify, resolve_roots};
pub use config::{Algorithm, FeatureSource, RootSelection, RunArgs, RunConfig};
pub use error::{CliError, CliResult, ExitKind};
pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "khop", version, about = "Deterministic graph sampling for GNN mini-batches")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample, assemble mini-batches and write them with a run manifest.
    Sample(RunArgs),
    /// Check mini-batch forward against whole-graph forward, and both strategies against each other.
    Verify(RunArgs),
    /// Time sampling against the forward pass; count fetches and replication.
    Bench(RunArgs),
    /// BFS-partition the graph and write the assignment.
    Partition(RunArgs),
    /// Write the binary graph cache and feature matrix.
    Export(RunArgs),
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitKind::Config as i32 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let (args, cmd): (&RunArgs, fn(&RunConfig) -> CliResult<Report>) = match &cli.command {
        Command::Sample(a) => (a, cmd_sample),
        Command::Verify(a) => (a, cmd_verify),
        Command::Bench(a) => (a, cmd_bench),
        Command::Partition(a) => (a, cmd_partition),
        Command::Export(a) => (a, cmd_export),
    };
    let result = args.resolve().and_then(|cfg| cmd(&cfg));
    match result {
        Ok(report) => {
            if let Err(e) = report.emit(out) {
                let _ = writeln!(err, "error: {e}");
                return ExitKind::Io as i32;
            }
            match report.failure {
                Some(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    ExitKind::Invariant as i32
                }
                None => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
