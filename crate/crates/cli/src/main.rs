mod args;
mod cache;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

fn dispatch(cli: &Cli) -> Result<commands::Outcome, Failure> {
    match &cli.command {
        Command::Weights { algebra, format } => commands::weights(algebra, *format),
        Command::Fusion(cmd) => commands::fusion(cmd),
        Command::Walg(cmd) => commands::walg(cmd),
        Command::Levelrank(cmd) => commands::levelrank(cmd),
        Command::Char(args) => commands::character(args),
        Command::Sicoh(args) => commands::sicoh(args),
        Command::Verify { suite, quick, format } => commands::verify(suite, *quick, *format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match dispatch(&cli) {
        Ok(outcome) => {
            if let Err(e) = output::emit(&outcome.text, cli.output.as_deref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            match outcome.failure {
                None => ExitCode::SUCCESS,
                Some(msg) => {
                    eprintln!("verification failed: {msg}");
                    ExitCode::from(1)
                }
            }
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("invalid input: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
