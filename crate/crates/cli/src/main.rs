//! Command-line runner for accessible-path experiments.

mod config;
mod output;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use landscape_paths::ExecMode;

use config::{Command, RunConfig};

/// Exact counts and Monte Carlo estimates of accessible paths on the hypercube.
#[derive(Debug, Parser)]
#[command(name = "landscape-paths", version)]
struct Cli {
    /// What to run; may instead be given as "command" in --json-config
    #[arg(value_enum)]
    command: Option<Command>,
    /// JSON file with run settings; flags take precedence
    #[arg(long)]
    json_config: Option<PathBuf>,
    /// Worker threads; results do not depend on it
    #[arg(long, env = "LANDSCAPE_PATHS_THREADS")]
    threads: Option<usize>,
    /// Run replicates on the calling thread only
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(landscape_paths::Error),
    Io(io::Error),
}

impl From<landscape_paths::Error> for CliError {
    fn from(e: landscape_paths::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use landscape_paths::Error;
        match self {
            CliError::Config(_) | CliError::Core(Error::InvalidArgument(_)) => 2,
            CliError::Core(Error::ResourceLimit(_)) => 3,
            CliError::Core(Error::Invariant(_)) => 4,
            CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) => format!("invalid config: {m}"),
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => format!("i/o error: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("landscape-paths: {}", e.message().replace('\n', " "));
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut flags = cli.config;
    flags.command = cli.command;
    let config = match &cli.json_config {
        Some(path) => flags.merged(RunConfig::load(path)?),
        None => flags,
    }
    .with_defaults();
    let mode = if cli.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    };
    let table = with_threads(cli.threads, || run::run(&config, mode))??;
    match &config.output {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Config(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            output::write(&mut w, &config, &table)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            output::write(&mut w, &config, &table)?;
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Config("--threads must be at least 1".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T>(threads: Option<usize>, f: impl FnOnce() -> T) -> Result<T, CliError> {
    if threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    Ok(f())
}

#[cfg(test)]
mod tests {
    use super::*;
    use landscape_paths::Error;

    #[test]
    fn documented_exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(Error::InvalidArgument("x".into())).exit_code(), 2);
        assert_eq!(CliError::Core(Error::ResourceLimit("x".into())).exit_code(), 3);
        assert_eq!(CliError::Core(Error::Invariant("x".into())).exit_code(), 4);
    }
}
