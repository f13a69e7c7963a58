//! File formats, spec-string grammars, and experiment runners behind the
//! `ergodesk` binary. The binary itself is a thin argument layer over
//! [`run`]; everything here is callable from tests.

pub mod config;
pub mod io;
pub mod parse;
pub mod run;

/// Failure classes aligned with the binary's exit codes: a violated property
/// exits 1, bad input text or config exits 2, filesystem trouble exits 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Property(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Property(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}
