//! Command-line front end for the `photonloc` library.
//!
//! Exit codes: 0 on success, 1 for invalid arguments, unreadable or
//! malformed input and IO failures, 2 when a numerical check fails.

pub mod args;
pub mod check;
pub mod commands;
pub mod svg;

use std::fmt;

pub use args::{Cli, Command, CommonArgs, Format, PlotKind, Suite};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<photonloc::Error> for CliError {
    fn from(e: photonloc::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    cli.common.validate()?;
    match &cli.command {
        Command::DemoFig2 { save_states } => commands::demo_fig2(&cli.common, *save_states),
        Command::Energy { state } => commands::energy(&cli.common, state),
        Command::Locality {
            state,
            source_volume,
            windows,
        } => commands::locality(&cli.common, state, source_volume.as_deref(), windows),
        Command::Check { suite } => check::run(&cli.common, suite),
    }
}
