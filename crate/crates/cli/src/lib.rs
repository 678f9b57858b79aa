//! `ll1kit` command line: grammar analysis, table building, parsing and
//! corpus checking.

mod batch;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use batch::{BatchEntry, BatchReport, LabelStats};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Rejected = 1,
    Usage = 2,
    Input = 3,
    Grammar = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Grammar(String),
}

impl CliError {
    fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) => ExitStatus::Usage,
            CliError::Input(_) => ExitStatus::Input,
            CliError::Grammar(_) => ExitStatus::Grammar,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "ll1kit",
    version,
    about = "LL(1) grammar toolkit and table-driven sentence checker"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print FIRST and FOLLOW sets.
    Analyze { grammar: PathBuf },
    /// Print the left-factored grammar.
    Factor { grammar: PathBuf },
    /// Build the predictive table and list its conflicts.
    Table {
        grammar: PathBuf,
        /// Exit 4 when the table has conflicts.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare the shipped printed sets and table with computed ones.
    DiffPaper {
        /// Read fixtures from this directory instead of the built-in copies.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check one sentence.
    Parse {
        #[command(flatten)]
        setup: Setup,
        /// Treat the input as space-separated tags.
        #[arg(long)]
        tags: bool,
        /// Append the move trace.
        #[arg(long)]
        trace: bool,
        /// Append the parse tree of an accepted sentence.
        #[arg(long)]
        tree: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        input: String,
    },
    /// Print the tags of each sentence in the input.
    Tag {
        /// Lexicon file (`.xml` or tab-separated); repeatable.
        #[arg(long)]
        lexicon: Vec<PathBuf>,
        input: String,
    },
    /// Check every entry of a corpus file.
    Batch {
        #[command(flatten)]
        setup: Setup,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Corpus file; the shipped corpus when omitted.
        corpus: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct Setup {
    /// Grammar file; the built-in Bangla grammar when omitted.
    #[arg(long)]
    pub grammar: Option<PathBuf>,
    /// Table file to drive the parser, or `printed` for the shipped one.
    /// Without it the table is computed from the grammar.
    #[arg(long)]
    pub table: Option<String>,
    /// Lexicon file (`.xml` or tab-separated); repeatable. The shipped
    /// lexicon when omitted.
    #[arg(long)]
    pub lexicon: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Policy::Deterministic)]
    pub policy: Policy,
    /// Maximum nonterminal expansions per sentence.
    #[arg(long, default_value_t = ll1kit::driver::DEFAULT_STEP_BUDGET)]
    pub budget: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Deterministic,
    #[value(alias = "backtracking")]
    Backtrack,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                ExitStatus::Usage.code()
            } else {
                let _ = write!(out, "{e}");
                ExitStatus::Success.code()
            };
            return code;
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(status) => status.code(),
        Err(e) => {
            let _ = writeln!(err, "ll1kit: {e}");
            e.status().code()
        }
    }
}
