use std::process::ExitCode;

use clap::Parser;
use qvanish::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
