use std::process::ExitCode;

use clap::Parser;
use dephaselab::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dephaselab::run(&cli, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dephaselab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
