//! `ginibre`: command-line front end for the tail computations.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl From<ginibre_core::Error> for CliError {
    fn from(e: ginibre_core::Error) -> Self {
        match e {
            ginibre_core::Error::Numerical { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

fn one_line(s: &str) -> String {
    s.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // clap appends usage hints; keep the first line only
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", one_line(first));
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(m)) => {
            eprintln!("error: {}", one_line(&m));
            ExitCode::from(2)
        }
        Err(CliError::Numerical(m)) => {
            eprintln!("error: {}", one_line(&m));
            ExitCode::from(3)
        }
    }
}
