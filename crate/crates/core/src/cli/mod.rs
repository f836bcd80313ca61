//! Command-line front end. Every run that gets past argument parsing
//! writes exactly one manifest recording the command line, the resolved
//! settings, the outputs, and (in a separate `runtime` field) wall time
//! and thread count.

mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use serde_json::{Map, Value};

pub use args::{Cli, Command, Common, ConstructionArg, Format, MomentArg, OperatorArg};
pub use commands::{DEFAULT_DIM, DEFAULT_KMAX};

use crate::export::{to_json, write_text};
use crate::{PhaseError, Result};

pub const DEFAULT_MANIFEST: &str = "phasekit.manifest.json";

#[derive(Serialize)]
struct Runtime {
    wall_seconds: f64,
    threads: usize,
}

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    subcommand: &'static str,
    resolved: Map<String, Value>,
    outputs: Vec<String>,
    exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    runtime: Runtime,
}

fn manifest_path(common: &Common) -> PathBuf {
    if let Some(p) = &common.manifest {
        return p.clone();
    }
    match &common.out {
        Some(out) => {
            let mut p = out.clone().into_os_string();
            p.push(".manifest.json");
            PathBuf::from(p)
        }
        None => PathBuf::from(DEFAULT_MANIFEST),
    }
}

fn write_outputs(
    common: &Common,
    outcome: &commands::Outcome,
    outputs: &mut Vec<String>,
) -> Result<()> {
    match &common.out {
        Some(path) => {
            write_text(path, &outcome.report)?;
            outputs.push(path.display().to_string());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.report.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| PhaseError::io(Path::new("<stdout>"), e))?;
            outputs.push("<stdout>".to_string());
        }
    }
    for (path, text) in &outcome.sidecars {
        write_text(path, text)?;
        outputs.push(path.display().to_string());
    }
    Ok(())
}

fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(PhaseError::Validation(
                "--threads must be at least 1".into(),
            ));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| PhaseError::Validation(format!("cannot start thread pool: {e}")))
}

/// Runs one command line and returns the process exit code: 0 success,
/// 1 validation or parse error, 2 convergence failure, 3 I/O error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let start = Instant::now();
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };

    let mut ctx = commands::Context::new(&cli.common);
    let mut outputs = Vec::new();
    let mut threads = rayon::current_num_threads();
    let result = build_pool(cli.common.threads).and_then(|pool| {
        threads = pool.current_num_threads();
        pool.install(|| commands::execute(&cli.command, &mut ctx))
    });
    let result = result.and_then(|outcome| {
        write_outputs(&cli.common, &outcome, &mut outputs)?;
        Ok(outcome.exit_code)
    });
    let (exit_code, error) = match result {
        Ok(code) => (code, None),
        Err(e) => {
            eprintln!("phasekit: {e}");
            (e.exit_code(), Some(e.to_string()))
        }
    };

    let path = manifest_path(&cli.common);
    let manifest = Manifest {
        tool: "phasekit",
        version: env!("CARGO_PKG_VERSION"),
        command: std::iter::once("phasekit".to_string())
            .chain(
                argv.iter()
                    .skip(1)
                    .map(|a| a.to_string_lossy().into_owned()),
            )
            .collect(),
        subcommand: cli.command.name(),
        resolved: ctx.resolved,
        outputs,
        exit_code,
        error,
        runtime: Runtime {
            wall_seconds: start.elapsed().as_secs_f64(),
            threads,
        },
    };
    match to_json(&manifest).and_then(|text| write_text(&path, &text)) {
        Ok(()) => exit_code,
        Err(e) => {
            eprintln!("phasekit: {e}");
            if exit_code == 0 {
                e.exit_code()
            } else {
                exit_code
            }
        }
    }
}
