//! Batch driver behind the `schurmult` binary: reads spec files, runs norm estimates,
//! convergence experiments and invariant checks, and writes CSV reports.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error, 3 precondition
//! violation (including unreadable inputs).

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod report;

use std::path::Path;

pub use commands::{cmd_gen, cmd_norm, cmd_profile, cmd_verify};
pub use config::{Cli, CommandName, Flags, RunConfig};
pub use error::CliError;

use error::{EXIT_OK, EXIT_VERIFY_FAILED};

/// Runs one command and writes its outputs; returns the exit code of a completed run.
/// Reports go to `--output` when given, otherwise to `stdout`.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn std::io::Write) -> Result<i32, CliError> {
    let (report, code) = match cfg.command {
        CommandName::Norm => (cmd_norm(cfg)?, EXIT_OK),
        CommandName::Profile => {
            let out = cmd_profile(cfg)?;
            if let Some(p) = &cfg.plot_data {
                write_file(p, &out.plot)?;
            }
            (out.report, EXIT_OK)
        }
        CommandName::Verify => {
            let out = cmd_verify(cfg)?;
            let code = if out.failures == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED };
            (out.report, code)
        }
        CommandName::Gen => {
            let out = cmd_gen(cfg)?;
            let dir = cfg.output.as_deref().expect("validated");
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            for (name, text) in &out.files {
                write_file(&dir.join(name), text)?;
            }
            stdout
                .write_all(out.report.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            return Ok(EXIT_OK);
        }
    };
    match &cfg.output {
        Some(p) => write_file(p, &report)?,
        None => stdout
            .write_all(report.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e))?,
    }
    Ok(code)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
