//! Command-line front end: grids behind the figures, MTTF reports, process
//! simulation and the formula-versus-oracle validation suite.
//!
//! Exit status: 0 success, 1 usage or configuration error, 2 numerical
//! failure, 3 validation failure.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::{Parser, Subcommand};
use fgm_linexp::Error as CoreError;

use config::CommonFlags;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Usage = 1,
    Numerical = 2,
    Validation = 3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Usage,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Numerical,
            message: message.into(),
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: ExitKind::Validation,
            message: message.into(),
        }
    }

    /// I/O failures share the configuration exit status.
    pub fn io(message: impl Into<String>) -> Self {
        Self::usage(message)
    }

    /// Parameter errors from the library while reading the configuration.
    pub fn from_core_usage(e: CoreError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_) => Self::usage(e.to_string()),
            _ => Self::numerical(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fgm-linexp",
    version,
    about = "FGM bivariate law with linear exponential marginals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Joint cdf, pdf, survival or hazard on an (x, y) grid, one block per lambda.
    Eval {
        #[arg(value_enum)]
        quantity: commands::Quantity,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Distribution and hazards of the series and parallel system lifetimes.
    Extremes {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Product moment by closed form, quadrature and both series.
    Mttf {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Minimal repair or replacement process over a window.
    Simulate {
        #[arg(value_enum)]
        policy: commands::PolicyArg,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Closed forms against their numerical oracles.
    Validate {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Data grids for the three figure parameter sets, written into a directory.
    Figures {
        /// Output directory.
        #[arg(long)]
        out: std::path::PathBuf,
    },
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() {
                ExitKind::Usage as i32
            } else {
                0
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.kind as i32
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Eval { quantity, common } => commands::eval(&common, quantity, stdout),
        Command::Extremes { common } => commands::extremes(&common, stdout),
        Command::Mttf { common } => commands::mttf(&common, stdout),
        Command::Simulate { policy, common } => commands::simulate(&common, policy, stdout),
        Command::Validate { common } => validate::run(&common, stdout, stderr),
        Command::Figures { out } => commands::figures(&out, stdout),
    }
}
