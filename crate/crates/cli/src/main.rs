mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure classes, mapped to exit codes 1 and 2.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and did not pass.
    Check(String),
    /// Bad flags, unreadable inputs, or a computation that could not run.
    Input(String),
}

impl From<conecd::Error> for Failure {
    fn from(e: conecd::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = cli.config.clone();
    let jobs = cli.jobs;
    let run = move || -> Outcome {
        let cfg = config.as_deref();
        match cli.command {
            Command::BuildCone(a) => commands::build_cone(config::resolve(&a, cfg)?),
            Command::Validate(a) => commands::validate(config::resolve(&a, cfg)?),
            Command::Wasserstein(a) => commands::wasserstein(config::resolve(&a, cfg)?),
            Command::CdCheck(a) => commands::cd_check(config::resolve(&a, cfg)?),
            Command::ApexScan(a) => commands::apex_scan(config::resolve(&a, cfg)?),
            Command::Spectral(a) => commands::spectral(config::resolve(&a, cfg)?),
            Command::Coeffs(a) => commands::coeffs(config::resolve(&a, cfg)?),
        }
    };
    match conecd::par::with_jobs(jobs, run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
