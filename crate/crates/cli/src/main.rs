use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use noisy_games_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(cli.command, &mut out) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = out.flush();
            if !matches!(e, CliError::OutputClosed) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
