//! Command-line front end: kernel spec files in, CSV reports out.
//!
//! Exit codes: 0 success, 2 validation failure, 3 parse failure, 4 size
//! guard, 5 coupling infeasible. Diagnostics go to stderr as
//! `error[<token>]: <message>`.

pub mod commands;
pub mod csv;
pub mod spec_file;

use clap::error::ErrorKind;
use clap::Parser;
use commands::{execute, Cli};
use std::ffi::OsString;
use std::io::Write;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => 3,
            };
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            if out.write_all(outcome.report.render().as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(f) => {
            let _ = writeln!(err, "error[{}]: {}", f.token(), f.message());
            f.exit_code()
        }
    }
}
