use std::process::ExitCode;

use clap::Parser;
use schurmult_cli::config::CORPUS_DIR_ENV;
use schurmult_cli::{execute, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let corpus_dir = std::env::var_os(CORPUS_DIR_ENV).map(Into::into);
    let result = RunConfig::resolve(cli.command, &cli.flags, corpus_dir)
        .and_then(|cfg| execute(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
