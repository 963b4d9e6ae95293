//! The `smcount` command line.
//!
//! Every subcommand reads one input file (theory header, declarations and a
//! formula, or named sections) and prints a report, as text or as a single
//! JSON document with `--json`.

mod commands;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use smcount_core::Error;

pub use report::Report;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CAP: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "smcount", version, about = "Exact counting in pure sets and F_p-vector spaces")]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Parameter pattern to count under: `a,b|c` for the pure set,
    /// `a + b = 0; c = 0` for vector spaces. Unlisted parameters are generic.
    #[arg(long, global = true, value_name = "PATTERN")]
    pattern: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counting polynomial, Morley rank and degree of a formula.
    Count { file: PathBuf },
    /// One polynomial per class of parameter patterns.
    Partition { file: PathBuf },
    /// Fiber identity for the correspondence in section PSI.
    Unimod { file: PathBuf },
    /// Dense/sparse classification of the graph in sections V, W, E.
    Regularity {
        file: PathBuf,
        /// Split V and W into degree-one pieces first.
        #[arg(long)]
        split: bool,
    },
    /// Compare engine predictions with brute-force counts.
    Verify {
        file: PathBuf,
        /// Model sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random vertex-subset pairs per piece, for graphs too large to check exhaustively.
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// The disjoint cells behind a count.
    Decompose { file: PathBuf },
}

/// Why a command did not produce a clean report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Engine(Error),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Io(_) => "io",
            Failure::Engine(e) => e.kind(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Engine(e) if e.is_cap() => EXIT_CAP,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
            Failure::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl From<smcount_core::formula::ParseError> for Failure {
    fn from(e: smcount_core::formula::ParseError) -> Self {
        Failure::Engine(e.into())
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let text = e.to_string();
                    let first = text.lines().next().unwrap_or_default();
                    let _ = writeln!(err, "error[usage]: {}", first.trim_start_matches("error: ").trim());
                    let rest: Vec<&str> = text.lines().skip(1).collect();
                    let _ = writeln!(err, "{}", rest.join("\n").trim_end());
                    EXIT_USAGE
                }
            };
        }
    };

    let outcome = match &cli.command {
        Command::Count { file } => commands::count(file, cli.pattern.as_deref()),
        Command::Partition { file } => commands::partition(file, cli.pattern.as_deref()),
        Command::Unimod { file } => commands::unimod(file, cli.pattern.as_deref()),
        Command::Regularity { file, split } => commands::regularity(file, cli.pattern.as_deref(), *split),
        Command::Verify { file, sizes, seed, trials } => {
            commands::verify(file, cli.pattern.as_deref(), sizes, *seed, *trials)
        }
        Command::Decompose { file } => commands::decompose(file, cli.pattern.as_deref()),
    };

    emit(outcome, cli.json, cli.command.name(), out, err)
}

/// Prints a command outcome and maps it to the exit code.
fn emit(outcome: Result<Report, Failure>, json: bool, command: &str, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match outcome {
        Ok(report) => {
            let written = if json {
                writeln!(out, "{}", report.json)
            } else {
                write!(out, "{}", report.text)
            };
            if written.is_err() {
                return EXIT_USAGE;
            }
            if report.mismatch {
                let _ = writeln!(err, "error[mismatch]: the oracle disagrees with the engine");
                EXIT_MISMATCH
            } else {
                EXIT_OK
            }
        }
        Err(failure) => {
            let message = failure.to_string().replace('\n', " ");
            let _ = writeln!(err, "error[{}]: {message}", failure.kind());
            if json {
                let doc = serde_json::json!({
                    "command": command,
                    "error": failure.kind(),
                    "message": message,
                });
                let _ = writeln!(out, "{doc}");
            }
            failure.exit_code()
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Partition { .. } => "partition",
            Command::Unimod { .. } => "unimod",
            Command::Regularity { .. } => "regularity",
            Command::Verify { .. } => "verify",
            Command::Decompose { .. } => "decompose",
        }
    }
}
