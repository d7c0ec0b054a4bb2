use std::process::ExitCode;

use bdht_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bdht: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
