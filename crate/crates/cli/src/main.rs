use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rosen_morse::cli::{parse_config_with, run, Command};
use rosen_morse::Error;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  configuration parse error
  3  numeric error (domain, pole, convergence, bracketing, consistency, io)
  4  validation failure

On failure a single line `error: kind=<kind> code=<code> message=<text>` is
written to stderr.";

/// Bound states, wave functions and Green's functions of the q-deformed
/// radial Rosen-Morse potential.
#[derive(Debug, Parser)]
#[command(version, after_help = EXIT_CODES)]
struct Args {
    /// Flat key=value parameter file.
    #[arg(long)]
    config: PathBuf,

    /// Output directory for CSV files.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Command to run, overriding `command=` in the file
    /// (potential, spectrum, wavefunction, greens, validate).
    #[arg(long)]
    command: Option<String>,

    /// Suppress the summary on stdout.
    #[arg(long)]
    quiet: bool,
}

fn fail(err: &Error) -> ExitCode {
    let message = err.to_string().replace('\n', " ");
    eprintln!("error: kind={} code={} message={}", err.kind(), err.exit_code(), message);
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command.as_deref().map(str::parse::<Command>).transpose() {
        Ok(c) => c,
        Err(message) => return fail(&Error::Parse { line: 0, message }),
    };
    let text = match fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return fail(&Error::from(e)),
    };
    let report = match parse_config_with(&text, command).and_then(|cfg| run(&cfg, &args.out)) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    if !args.quiet {
        print!("{}", report.summary);
    }
    match report.failure {
        Some(msg) => fail(&Error::Validation(msg)),
        None => ExitCode::SUCCESS,
    }
}
