mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lab(#[from] ltflab::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lab(e) if e.is_capacity() => 3,
            _ => 1,
        }
    }
}

fn run(argv: Vec<String>) -> Result<(), CliError> {
    let args = config::expand(argv)?;
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                Err(CliError::Usage(String::new()))
            } else {
                Ok(())
            };
        }
    };
    eprintln!(
        "ltflab version={} seed={} config={}",
        env!("CARGO_PKG_VERSION"),
        cli.seed,
        config::config_hash(&args, cli.seed)
    );
    let (seed, jobs) = (cli.seed, cli.jobs);
    ltflab::par::with_jobs(jobs, move || commands::dispatch(cli.command, seed))
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
