use std::process::ExitCode;

use clap::Parser;
use opuc::cli::Cli;

fn main() -> ExitCode {
    let config = Cli::parse().command.into_config();
    eprintln!("{}", config.echo());
    match opuc::run(&config) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
