use std::process::ExitCode;

use clap::Parser;
use lexgrade::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
