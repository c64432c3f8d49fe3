//! Library half of the `hqis` binary: argument definitions, subcommands and
//! report types.

pub mod args;
pub mod commands;
pub mod complex;
pub mod error;
pub mod report;

use std::io::Write;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, EXIT_USAGE, EXIT_VERIFICATION};

/// Parse `argv`, run the command and return the process exit code.
pub fn run_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match commands::dispatch(&cli, out) {
        Ok(true) => 0,
        Ok(false) => EXIT_VERIFICATION,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
