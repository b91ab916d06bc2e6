//! Command-line front end: instance generation, tree building, evaluation
//! and multi-trial comparison over CSV point files and JSON trees.

pub mod args;
pub mod build;
pub mod commands;
pub mod error;
pub mod io;

pub use args::Cli;
pub use error::{CliError, CliResult};

use args::Command;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen(a) => commands::cmd_gen(a),
        Command::Cluster(a) => commands::cmd_cluster(a),
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Compare(a) => commands::cmd_compare(a),
    }
}
