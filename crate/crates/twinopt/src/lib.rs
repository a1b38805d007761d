//! File formats, reports, charts and the `twinopt` command line on top of
//! `twinopt-core`.

pub mod chart;
pub mod cli;
pub mod commands;
pub mod error;
pub mod formats;
pub mod instance;
pub mod report;

use std::io::Write;

use cli::{Cli, Command};
use error::CliResult;

/// Dispatches a parsed command line; returns the exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    match &cli.command {
        Command::GenGraph(args) => commands::gen_graph(args, stdout),
        Command::GenRrsets(args) => commands::gen_rrsets(args, stdout),
        Command::Run(args) => commands::run(args, stdout),
        Command::Sweep(args) => commands::sweep(args, stdout),
        Command::Certify(args) => commands::certify(args, stdout),
    }
}
