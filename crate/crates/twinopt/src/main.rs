use std::process::ExitCode;

use clap::Parser;
use twinopt::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let code = match twinopt::execute(&cli, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("twinopt: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
