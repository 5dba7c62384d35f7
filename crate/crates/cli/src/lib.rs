//! Command implementations behind the `gconc` binary.
//!
//! Every command returns its full output as a string together with an exit status, so
//! the binary only prints and exits.

pub mod commands;
pub mod input;
pub mod report;
pub mod verify;

use std::path::PathBuf;

/// Process exit statuses.
pub mod exit {
    /// Success; for `bound`, a positive bound (full Schmidt rank certified).
    pub const OK: u8 = 0;
    /// A verification suite reported a failure.
    pub const VERIFY_FAILED: u8 = 1;
    /// Malformed input, invalid arguments, or an unwritable output path.
    pub const INPUT_ERROR: u8 = 2;
    /// `bound` ran but the bound is zero.
    pub const INCONCLUSIVE: u8 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("invalid state: {0}")]
    Invalid(#[from] gconc::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        exit::INPUT_ERROR
    }
}

/// Text emitted by a command and the status to exit with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub exit: u8,
}

impl Outcome {
    pub fn ok(output: String) -> Self {
        Self { output, exit: exit::OK }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
    Csv,
}
