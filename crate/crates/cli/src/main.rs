use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use vbs_swap_cli::{run, Cli, CliError};

fn write_out(cli: &Cli, text: &str) -> Result<(), CliError> {
    match cli.command.out_path() {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|r| write_out(&cli, &r.text).map(|()| r.exit_code)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
