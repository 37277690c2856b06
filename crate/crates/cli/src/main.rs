use std::process::ExitCode;

use clap::Parser;
use qca_cli::{max_qubits_from_env, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = max_qubits_from_env().and_then(|max| run(&cli, max, &mut std::io::stdout().lock()));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
