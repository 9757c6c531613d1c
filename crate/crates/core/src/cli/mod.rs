//! Command-line surface. [`run`] parses arguments, executes one command and
//! returns the exit code together with what would be written to stdout and
//! stderr, so the binary and the tests share one code path.

mod commands;
mod output;

pub use commands::execute;
pub use output::{
    parse_trace_csv, parse_trace_json, Discrepancy, OutputDocument, TraceRow, TraceTablePayload,
    SCHEMA,
};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_CHARACTERISTIC: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "cy-modularity", version, about = "Point counts, traces and modularity checks for twisted fibre products of S1(6)")]
pub struct Cli {
    /// Worker threads for the counting layer (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Omit the timing block so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// Count the points of a resolved threefold over F_p.
    Count(CountArgs),
    /// Table of counts and traces over all good primes up to a bound.
    Trace(TraceArgs),
    /// Check a twist against a newform fixture.
    Verify(VerifyArgs),
    /// Coefficients of the level-6 eta product.
    Eta(EtaArgs),
    /// Compare the untwisted product's traces with the eta product.
    Selfcheck(SelfcheckArgs),
    /// Covering set of primes for a ramification set.
    Covering(CoveringArgs),
    /// Export an embedded newform fixture.
    Fixture(FixtureArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CountArgs {
    #[arg(long)]
    pub twist: String,
    #[arg(long)]
    pub prime: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TraceArgs {
    #[arg(long)]
    pub twist: String,
    #[arg(long)]
    pub pmax: u64,
    /// Include p = 3 using the characteristic-3 fibre rules.
    #[arg(long)]
    pub allow_char3: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub twist: String,
    #[arg(long, default_value_t = 200)]
    pub plimit: u64,
    /// Compare against this level instead of the twist's own.
    #[arg(long)]
    pub fixture_level: Option<u32>,
    #[arg(long)]
    pub allow_char3: bool,
    #[arg(long, default_value_t = 200)]
    pub parity_bound: u64,
    /// Cubic `c3,c2,c1,c0` cutting out an S3/C3 extension (repeatable).
    #[arg(long = "cubic", allow_hyphen_values = true)]
    pub cubics: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EtaArgs {
    #[arg(long)]
    pub nmax: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SelfcheckArgs {
    #[arg(long)]
    pub pmax: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoveringArgs {
    /// Ramification set, comma separated; must contain 2.
    #[arg(long, value_delimiter = ',')]
    pub set: Vec<u64>,
    #[arg(long)]
    pub limit: u64,
    #[arg(long, value_delimiter = ',')]
    pub exclude: Vec<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FixtureArgs {
    #[arg(long)]
    pub level: u32,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnsupportedCharacteristic(_) => EXIT_CHARACTERISTIC,
        _ => EXIT_ARGUMENT,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ARGUMENT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            return Outcome {
                code: EXIT_ARGUMENT,
                stdout: String::new(),
                stderr: format!("error: thread pool: {e}\n"),
            }
        }
    };
    pool.install(|| execute(&cli))
}
