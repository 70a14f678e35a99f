mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use args::{parse_args, Backend, Command};
use dmfb_dilution::Exact;

/// Everything that can stop a run, with its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("invalid value for '{flag}': {source}")]
    Flag { flag: &'static str, source: dmfb_dilution::Error },
    #[error(transparent)]
    Invalid(#[from] dmfb_dilution::Error),
    #[error("search space too large: {0}")]
    Guard(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 2,
            _ => 1,
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    if let Some(threads) = cmd.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))?;
    }
    let mut diag = std::io::stderr().lock();
    let data = match cmd.backend {
        Backend::Float => run::execute::<f64>(&cmd.action, cmd.format, &mut diag)?,
        Backend::Rational => run::execute::<Exact>(&cmd.action, cmd.format, &mut diag)?,
    };
    let written = match &cmd.output {
        Some(path) => std::fs::write(path, &data).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&data).and_then(|_| stdout.flush()).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    };
    written
}

fn main() -> ExitCode {
    let result = parse_args(std::env::args_os()).and_then(run);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Clap(e)) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            ExitCode::SUCCESS
        }
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
