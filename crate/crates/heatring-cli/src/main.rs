//! Exit-status contract: 0 success (including --help and --version), 1 for
//! argument errors, 2 for runtime failures (stability guard, I/O, protocol).

mod cli;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let parsed = match cli::Cli::try_parse() {
        Ok(parsed) => parsed,
        Err(e) => {
            // clap routes help/version to stdout and usage errors to stderr.
            let _ = e.print();
            let requested_info =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            return if requested_info {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match commands::run(parsed.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
