//! Command-line front end: instance generation, solver runs, budget-matched
//! benchmarks and QUBO reductions. Every record is reproducible from its
//! echoed configuration and seed unless `--timing` is requested.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;

pub use args::Cli;
pub use error::{CliError, CliResult};

use args::Command;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => commands::generate::run(a),
        Command::Solve(a) => commands::solve::run_command(a),
        Command::Bench(a) => commands::bench::run_command(a),
        Command::Quadratize(a) => commands::reduce::run_quadratize(a),
        Command::VerifyReduction(a) => commands::reduce::run_verify(a),
    }
}
