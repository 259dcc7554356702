use std::fmt;
use std::io::{self, Write};
use std::process::ExitCode;

mod args;
mod commands;
mod config;
mod report;
mod units;

use args::Cli;

/// An input problem, as opposed to a numerical failure. Exit code 1.
#[derive(Debug)]
pub struct UsageError(pub anyhow::Error);

impl UsageError {
    pub fn wrap(e: anyhow::Error) -> anyhow::Error {
        anyhow::Error::new(UsageError(e))
    }

    pub fn msg(m: impl fmt::Display) -> anyhow::Error {
        Self::wrap(anyhow::anyhow!("{m}"))
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(e: &anyhow::Error) -> u8 {
    use xfermi_core::Error as E;
    for cause in e.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if let Some(core) = cause.downcast_ref::<E>() {
            return match core {
                E::Domain { .. } | E::Unsupported(_) | E::Capacity { .. } | E::IndexOutOfRange { .. } => 1,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::parse_overridable(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = commands::run(&cli).and_then(|(report, format)| {
        let mut out = io::BufWriter::new(io::stdout().lock());
        report.write(format, &mut out)?;
        out.flush()?;
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
