//! `qpade`: tables and verification reports for the q-zeta approximants.

mod args;
mod asymptotics;
mod failure;
mod identity;
mod output;
mod table;
mod verify;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, RunConfig};
use failure::Failure;

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let common = match &cli.command {
        Command::Table(c) | Command::Asymptotics(c) | Command::Identity(c) => c,
        Command::Verify(v) => &v.common,
    };
    let config = RunConfig::try_from(common).map_err(Failure::Usage)?;
    match &cli.command {
        Command::Table(_) => table::run(&config),
        Command::Verify(v) => verify::run(&config, v.suite),
        Command::Asymptotics(_) => asymptotics::run(&config),
        Command::Identity(_) => identity::run(&config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qpade: {f}");
            f.exit_code()
        }
    }
}
