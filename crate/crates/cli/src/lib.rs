//! `dynaug`: augment video clips, inspect schedules, report statistics,
//! wrap the H.264 corruption command and benchmark throughput.
//!
//! Exit codes: 0 success, 1 usage or fatal error, 2 some clips failed,
//! 3 a required external tool is missing. `corrupt` forwards ffmpeg's own
//! non-zero status.

mod args;
mod augment;
mod bench;
mod clips;
mod corrupt;
mod report;
mod schedule;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command, UsageError};

/// Output streams a command writes to.
pub struct Console<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut con = Console { out, err };
    let matches = match Cli::command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = con.out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = con.err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(con.err, "{}", e.render());
            return 1;
        }
    };
    let (_, sub) = matches.subcommand().expect("subcommand is required");

    let result = match &cli.command {
        Command::Augment(a) => augment::run(a, sub, &mut con),
        Command::Schedule(a) => schedule::run(a, sub, &mut con),
        Command::Report(a) => report::run(a, &mut con),
        Command::Corrupt(a) => corrupt::run(a, &mut con),
        Command::Bench(a) => bench::run(a, sub, &mut con),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(con.err, "error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                let _ = writeln!(con.err, "\nFor more information, try '--help'.");
            }
            1
        }
    };
    let _ = con.out.flush();
    code
}
