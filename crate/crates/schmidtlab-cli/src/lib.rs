//! Command-line front end for the `schmidtlab` library: eta sweeps of the
//! Schmidt-number curves, single-point decomposition dumps, and an
//! all-routes cross-check.
//!
//! Exit codes: 0 on success, 2 on a usage error (bad flags, bad config,
//! bad `SCHMIDTLAB_THREADS`), 1 on a numerical failure or a failed
//! verification.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;

use clap::Parser;

#[derive(Debug)]
pub enum CliError {
    /// The invocation itself is wrong; exit 2.
    Usage(String),
    /// The computation or I/O failed; exit 1.
    Runtime(String),
}

/// Applies `SCHMIDTLAB_THREADS` before any linear algebra runs: a positive
/// value caps the BLAS thread pool, 0 or unset leaves the library default.
pub fn apply_thread_env() -> Result<(), String> {
    let Ok(raw) = std::env::var("SCHMIDTLAB_THREADS") else {
        return Ok(());
    };
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(());
    }
    match trimmed.parse::<u32>() {
        Ok(0) => Ok(()),
        Ok(n) => {
            let n = n.to_string();
            std::env::set_var("OPENBLAS_NUM_THREADS", &n);
            std::env::set_var("OMP_NUM_THREADS", &n);
            Ok(())
        }
        Err(_) => Err(format!(
            "SCHMIDTLAB_THREADS must be a nonnegative integer (0 = auto), got `{raw}`"
        )),
    }
}

pub fn run() -> i32 {
    if let Err(msg) = apply_thread_env() {
        eprintln!("error: {msg}");
        return 2;
    }

    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests print to stdout and succeed; everything
            // else is a usage error.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };

    let outcome = match &cli.command {
        args::Command::Table(a) => {
            config::TableSettings::resolve(a).and_then(|cfg| commands::cmd_table(&cfg))
        }
        args::Command::Decompose(a) => {
            config::DecomposeSettings::resolve(a).and_then(|cfg| commands::cmd_decompose(&cfg))
        }
        args::Command::Verify(a) => {
            config::VerifySettings::resolve(a).and_then(|cfg| commands::cmd_verify(&cfg))
        }
    };

    match outcome {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
