//! Command-line front end for `bandforge-core`: model loading, report and CSV
//! output. The binary is a thin wrapper around [`run`].

pub mod cli;
pub mod commands;
pub mod format;
pub mod model;

use std::io::Write;

use anyhow::Result;

use cli::{Cli, Command};

/// Runs one subcommand, writing its report to `out`. Returns the exit status
/// for non-error outcomes (0, or a command-specific code).
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    let code = match &cli.command {
        Command::Bands(a) => commands::bands(a, out)?,
        Command::Density(a) => commands::density(a, out)?,
        Command::Zeros(a) => commands::zero_report(a, out)?,
        Command::Boundstates(a) => commands::boundstates(a, out)?,
    };
    out.flush()?;
    Ok(code)
}

/// The output path requested by the subcommand, if any.
pub fn output_path(cli: &Cli) -> Option<&std::path::Path> {
    let common = match &cli.command {
        Command::Bands(a) => &a.common,
        Command::Density(a) => &a.common,
        Command::Zeros(a) => &a.common,
        Command::Boundstates(a) => &a.common,
    };
    common.out.as_deref()
}
