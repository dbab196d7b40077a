//! Command-line front end: `qnls <command> --config <path> [--out <path>]
//! [--format csv|plotdata] [--seed <u64>]`.
//!
//! Exit status: 0 success, 1 usage, 2 configuration or precondition error,
//! 3 numerical divergence, 4 I/O error. On any error no output file is written.

mod config;
mod emit;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use config::{parse_entries, Command, Entries, EstimateKind, FieldKind, RunConfig, Weights};
pub use emit::{emit_results, render_csv, render_plotdata, Cell, Format, PlotBlock, ResultRow, Table};
pub use run::{gaussian_data, run, MAX_WITNESS_N};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergence { .. } => EXIT_DIVERGENCE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_PRECONDITION,
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Norms,
    Solve,
    Picard,
    Illpose,
    Estimates,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Plotdata,
}

#[derive(Debug, Parser)]
#[command(name = "qnls", version, about = "Quadratic NLS numerical laboratory")]
struct Cli {
    #[arg(value_enum)]
    command: CommandArg,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Caps the worker pool from `QNLS_THREADS` (a positive integer).
fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("QNLS_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("QNLS_THREADS must be a positive integer, got {v:?}")))?;
    #[cfg(feature = "parallel")]
    {
        // A pool that already exists (e.g. in tests) keeps its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Error> {
    configure_threads()?;
    let text = std::fs::read_to_string(&cli.config)?;
    let command = match cli.command {
        CommandArg::Norms => Command::Norms,
        CommandArg::Solve => Command::Solve,
        CommandArg::Picard => Command::Picard,
        CommandArg::Illpose => Command::Illpose,
        CommandArg::Estimates => Command::Estimates,
    };
    let mut entries = parse_entries(&text)?;
    entries.insert("command".into(), command.name().into());
    if let Some(seed) = cli.seed {
        entries.insert("seed".into(), seed.to_string());
    }
    let cfg = RunConfig::from_entries(entries)?;
    let format = match cli.format {
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Plotdata) => Format::Plotdata,
        None => cfg.output_format.as_deref().unwrap_or("csv").parse()?,
    };
    let out = cli.out.or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
    let table = run(&cfg)?;
    emit_results(&table, out.as_deref(), format)
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("qnls: {e}");
            exit_code(&e)
        }
    }
}
