mod args;
mod commands;
mod report;

use std::process::ExitCode;

use args::{Cli, Command};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Detect(a) => commands::detect(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Invariants(a) => commands::invariants(a),
        Command::Map(a) => commands::map(a),
        Command::Tm(a) => commands::tm(a),
        Command::Ptrscan(a) => commands::ptrscan(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("locsym: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
