mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

/// Process outcome beyond plain success.
#[derive(Debug)]
pub enum Failure {
    /// A verification suite reported failing rows.
    Verification,
    /// Bad input, a violated domain guard or an I/O problem.
    Input(String),
    /// Parameters outside the supported regime.
    Unsupported(String),
}

impl From<adelab_core::Error> for Failure {
    fn from(e: adelab_core::Error) -> Self {
        match e {
            adelab_core::Error::Unsupported(_) => Failure::Unsupported(e.to_string()),
            other => Failure::Input(format!("[{}] {other}", other.kind())),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(format!("[io] {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(format!("[schema] {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => commands::eval(&cli.run, a),
        Command::Expand(a) => commands::expand(&cli.run, a),
        Command::Decompose(a) => commands::decompose(&cli.run, a),
        Command::Verify(a) => commands::verify(&cli.run, a),
        Command::Scan(a) => commands::scan(&cli.run, a),
        Command::Witness(a) => commands::witness(&cli.run, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
