//! Batch front-end for `mfhrr`: a session file describes the field, the potential,
//! named factorizations and morphisms and an optional group; each subcommand
//! computes one invariant and reports it as a table or as JSON.

pub mod commands;
pub mod output;
pub mod session;

pub use commands::{run, Command, Report};
pub use session::Session;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{context}: {source}")]
    Library {
        context: String,
        source: mfhrr::Error,
    },
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const INPUT_ERROR: i32 = 2;
}

/// Exit status for a completed command: only `verify --check` can fail.
pub fn exit_code(report: &Report, check: bool) -> i32 {
    if report.failed && check {
        exit::VERIFICATION_FAILED
    } else {
        exit::SUCCESS
    }
}

/// Formats a report for standard output.
pub fn render(report: &Report, as_json: bool) -> String {
    if as_json {
        let mut s = serde_json::to_string_pretty(&report.value).expect("JSON values serialize");
        s.push('\n');
        s
    } else {
        output::render_text(&report.value)
    }
}
