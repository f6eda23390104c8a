mod args;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let mut stdout = std::io::stdout().lock();
    match &cli.command {
        Command::Solve(a) => writeln!(stdout, "{}", commands::solve(a)?)?,
        Command::Classify(a) => writeln!(stdout, "{}", commands::classify_cmd(a)?)?,
        Command::Sweep(a) => commands::sweep(a, &mut stdout)?,
        Command::Verify(a) => {
            let (text, skipped) = commands::verify(a)?;
            writeln!(stdout, "{text}")?;
            if skipped {
                eprintln!("potts: consistency check skipped at the requested depth (budget exceeded)");
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("potts: {e}");
            e.exit_code()
        }
    }
}
