use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mfhrr_cli::{exit, exit_code, render, run, Command, Session};

#[derive(Parser, Debug)]
#[command(
    name = "mfhrr",
    version,
    about = "Exact invariants of matrix factorizations"
)]
struct Cli {
    /// Session file (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Exit with status 1 when `verify` finds a failing identity.
    #[arg(long, global = true)]
    check: bool,
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(path) = &cli.input else {
        eprintln!("error: --input <PATH> is required");
        return ExitCode::from(exit::INPUT_ERROR as u8);
    };
    let report = Session::from_path(path).and_then(|s| run(&cli.command, &s));
    match report {
        Ok(report) => {
            print!("{}", render(&report, cli.json));
            ExitCode::from(exit_code(&report, cli.check) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::INPUT_ERROR as u8)
        }
    }
}
