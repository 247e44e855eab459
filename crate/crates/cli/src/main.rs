use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use photonloc_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                // clap's own usage code is 2, which is reserved for failed checks
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("photonloc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
