//! Command line, artifact formats, the FFT grid tracer and the acceptance
//! suite on top of `riemann-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod fft;
pub mod output;
pub mod sampling;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use config::{Cli, Command, RunConfig};
use error::CliError;

/// Thread count of the rayon pool, read from this variable when set.
pub const THREADS_VAR: &str = "RIEMANN_THREADS";

/// Parses arguments, runs, writes the artifact and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_cli(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("riemann: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got `{v}`")))?;
        // A pool that is already built (repeated calls in one process) is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn run_cli(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let dry = cli.common.dry_run;
    let mut cfg = RunConfig::from_cli(cli);
    if let Command::Replay(r) = &cfg.command {
        let text = std::fs::read_to_string(&r.path)?;
        let mut stored = output::config_from_artifact(&text)?;
        if cfg.output.is_some() {
            stored.output = cfg.output.clone();
        }
        cfg = stored;
    }
    let artifact = commands::execute(&cfg, dry)?;
    let bytes = match artifact {
        None => {
            let mut s = serde_json::to_vec_pretty(&cfg)?;
            s.push(b'\n');
            s
        }
        Some(a) => a.render(&cfg)?,
    };
    match (&cfg.output, dry) {
        (Some(path), false) => std::fs::write(path, bytes)?,
        _ => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}
