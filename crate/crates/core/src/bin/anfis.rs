use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = anfis::cli::Cli::parse();
    match anfis::cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
