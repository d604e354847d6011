use std::io;
use std::process::ExitCode;

use nr_fec_cli::{execute, parse_args, CliError};

fn main() -> ExitCode {
    let spec = match parse_args(std::env::args_os()) {
        Ok(spec) => spec,
        Err(CliError::Syntax(e)) => e.exit(),
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    match execute(&spec, &mut io::stdout().lock(), &mut io::stderr().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
