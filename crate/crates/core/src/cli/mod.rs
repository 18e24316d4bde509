//! Command-line front end: run configuration, the four subcommands and the
//! CSV/JSON/SVG emitters.

pub mod args;
pub mod commands;
pub mod config;
pub mod emit;
pub mod svg;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command};
pub use commands::{
    run_design, run_joint, run_spectrum, run_verify, CheckResult, DesignReport, VerifyReport,
    VERIFY_SEED,
};
pub use config::{CommandConfig, OutputFormat, RunConfig};

use crate::error::{QpmError, Result};

/// Run the command a configuration describes. Diagnostics go to standard
/// error; the design table goes to standard output when the main output is
/// a file.
pub fn execute(config: &RunConfig) -> Result<()> {
    config.validate()?;
    if let Some(spec) = config.structure {
        if spec.odd_n_warning() {
            eprintln!(
                "warning: N = {} is odd; the structure has no twin peaks",
                spec.n()
            );
        }
    }
    match &config.command {
        CommandConfig::Spectrum(_) => {
            let grid = run_spectrum(config)?;
            if !grid.is_resolved() {
                eprintln!(
                    "warning: {:.1} samples per narrow-peak width; twin peaks may be unresolved",
                    grid.samples_per_feature
                );
            }
        }
        CommandConfig::Joint(_) => {
            run_joint(config)?;
        }
        CommandConfig::Design(_) => {
            let (report, table) = run_design(config)?;
            if config.output.out.is_some() {
                print!("{table}");
            } else if report.results.is_empty() {
                eprintln!("{}", DesignReport::NO_DESIGN);
            }
        }
        CommandConfig::Verify(_) => {
            let report = run_verify(config)?;
            eprintln!("verify: {} checks passed", report.checks.len());
        }
    }
    Ok(())
}

fn run_cli(cli: Cli) -> Result<()> {
    if cli.schema {
        print!("{}", emit::SCHEMA);
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err(QpmError::Config {
            field: "command".into(),
            reason: "expected one of spectrum, joint, design, verify".into(),
        });
    };
    let config = command.to_config()?;
    if let Some(path) = &command.common().save_config {
        emit::write_output(Some(path), &config.to_toml_string()?)?;
    }
    execute(&config)
}

/// Parse `args` (program name first), run, and return the process exit code:
/// 0 ok, 1 configuration error, 2 I/O error, 3 verification failure.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_cli(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
