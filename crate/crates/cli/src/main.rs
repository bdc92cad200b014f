use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = tomita_cli::Cli::parse();
    ExitCode::from(tomita_cli::run(&cli))
}
