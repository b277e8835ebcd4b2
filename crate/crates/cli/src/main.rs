mod args;
mod commands;
mod error;
mod manifest;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliError;

fn run(cli: Cli, argv: &[String]) -> Result<(), CliError> {
    match &cli.command {
        Command::Route(a) => commands::route(a, argv),
        Command::Calibrate(a) => commands::calibrate_cmd(a, argv),
        Command::Evaluate(a) => commands::evaluate(a, argv),
        Command::Analyze(a) => commands::analyze(a, argv),
        Command::Generate(a) => commands::generate(a, argv),
        Command::Bench(a) => commands::bench(a, argv),
        Command::Serve(a) => commands::serve(a),
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
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("skewroute: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
