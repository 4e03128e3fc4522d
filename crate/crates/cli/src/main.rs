//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.

mod args;
mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use grover_decomp::limits::TOL;
use grover_decomp::Error;
use serde::Serialize;

use args::{Cli, Command, OutputFormat};
use render::Render;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn emit<T: Serialize + Render>(report: &T, format: OutputFormat) -> std::io::Result<()> {
    let text = match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(std::io::Error::other)?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => report.csv(),
        OutputFormat::Pretty => report.pretty(),
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_resource_cap() {
        EXIT_RESOURCE
    } else {
        EXIT_USAGE
    })
}

fn finish<T: Serialize + Render>(report: &T, format: OutputFormat, passed: bool) -> ExitCode {
    if let Err(e) = emit(report, format) {
        // A closed pipe is not worth a failure code.
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            eprintln!("error: --tol must be a positive number");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    match &cli.command {
        Command::Params(a) => match commands::params(a.lambda) {
            Ok(r) => finish(&r, cli.output, true),
            Err(e) => fail(&e),
        },
        Command::Simulate(a) => match commands::simulate(a, cli.tol.unwrap_or(TOL)) {
            Ok(r) => finish(&r, cli.output, true),
            Err(e) => fail(&e),
        },
        Command::Verify(a) => match commands::verify(a, cli.tol) {
            Ok(r) => {
                let passed = r.passed;
                if !passed {
                    for s in r.suites.iter().filter(|s| !s.passed) {
                        for c in s.failures() {
                            eprintln!("failed: {} / {} (residual {:e}, tol {:e})", s.suite, c.name, c.residual, c.tol);
                        }
                    }
                }
                finish(&r, cli.output, passed)
            }
            Err(e) => fail(&e),
        },
        Command::Golden => match commands::golden(cli.tol) {
            Ok(r) => {
                let passed = r.passed;
                finish(&r, cli.output, passed)
            }
            Err(e) => fail(&e),
        },
    }
}
