use std::process::ExitCode;

use clap::Parser;
use hritz_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let summary: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.is_empty() && !l.starts_with("Usage:"))
                .collect();
            let message = summary.join(" ").trim_start_matches("error: ").to_string();
            eprintln!("{}", CliError::Usage(message).record());
            return ExitCode::from(1);
        }
    };
    match run(&cli.command) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(1)
        }
    }
}
