mod args;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Context;
use error::{CliError, CliResult};

fn run() -> CliResult<()> {
    let argv = config::expand(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => return Err(CliError::Config(e.to_string())),
        Err(e) => {
            e.print().ok();
            return Ok(());
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    if !(cli.alpha > 0.0 && cli.alpha < 1.0) {
        return Err(CliError::Config(format!("--alpha {} is outside (0, 1)", cli.alpha)));
    }
    let ctx = Context {
        alpha: cli.alpha,
        out_dir: cli.out_dir,
    };
    match &cli.command {
        Command::Rank(a) => commands::rank(a, &ctx),
        Command::Reduce(a) => commands::reduce(a, &ctx),
        Command::Sensitivity(a) => commands::sensitivity(a, &ctx),
        Command::Network(a) => commands::network(a, &ctx),
        Command::Bench(a) => commands::bench(a, &ctx),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("regomax: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
