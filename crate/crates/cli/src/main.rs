use std::io;
use std::process::ExitCode;

use clap::Parser;
use hsh_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    ExitCode::from(execute(&cli, &mut stdout.lock(), &mut stderr.lock()))
}
