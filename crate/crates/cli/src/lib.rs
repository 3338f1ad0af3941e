//! `spinlab`: command-line front end for the spin-uncertainty laboratory.
//!
//! [`dispatch`] parses an argument vector, runs the command and returns the
//! process exit code: 0 on success, 1 when a relation is violated beyond
//! tolerance, 2 for usage and argument errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub mod args;
mod commands;
pub mod manifest;

pub use args::Cli;
pub use manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] spin_uncertainty::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// What a command produced.
pub(crate) struct Outcome {
    /// File or stdout content.
    pub body: String,
    /// Printed to stdout when `body` goes to a file.
    pub summary: Option<String>,
    pub violation: bool,
}

enum Target {
    Stdout,
    File(PathBuf),
}

impl Target {
    fn of(emit: Option<&str>) -> Self {
        match emit {
            None | Some("-") | Some("json") => Target::Stdout,
            Some(path) => Target::File(PathBuf::from(path)),
        }
    }
}

/// Runs `argv` (program name first) and returns the exit code.
pub fn dispatch<S: AsRef<str>>(argv: &[S]) -> i32 {
    let argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&argv, cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn run(argv: &[String], cli: Cli) -> Result<i32, CliError> {
    if let args::Command::Replay(a) = &cli.command {
        let manifest = RunManifest::read(&a.manifest)?;
        let mut inner = vec![argv[0].clone()];
        inner.extend(manifest.argv.iter().cloned());
        let emit = cli
            .emit
            .clone()
            .unwrap_or_else(|| manifest.output.display().to_string());
        inner.extend(["--emit".to_string(), emit]);
        if cli.threads > 0 {
            inner.extend(["--threads".to_string(), cli.threads.to_string()]);
        }
        return Ok(dispatch(&inner));
    }

    let target = Target::of(cli.emit.as_deref());
    let json = cli.emit.is_some();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| commands::execute(&cli, json))?;

    match target {
        Target::Stdout => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.body.as_bytes())?;
            out.flush()?;
        }
        Target::File(path) => {
            fs::write(&path, &outcome.body)?;
            let manifest = RunManifest {
                command: cli.command.name().to_string(),
                argv: manifest::canonical_argv(argv, cli.seed),
                config: serde_json::to_value(&cli.command)?,
                seed: cli.seed,
                stochastic: cli.command.stochastic(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp: chrono::Utc::now().to_rfc3339(),
                output: path,
            };
            manifest.write()?;
            if let Some(summary) = &outcome.summary {
                print!("{summary}");
            }
        }
    }
    Ok(if outcome.violation {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}
