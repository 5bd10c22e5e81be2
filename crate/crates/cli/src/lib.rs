//! Command implementations behind the `pfaco` binary.
//!
//! Every command is a plain function over an argument struct so the
//! behaviors are testable without spawning processes; `main` only parses
//! flags, resolves the environment and maps errors to exit codes
//! (0 success, 1 usage/validation, 2 no-path/timeout, 3 I/O).

pub mod commands;
pub mod files;

use std::fmt;

/// CLI-level error carrying its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, malformed inputs, violated invariants (exit 1).
    Usage(String),
    /// No path exists or the solver timed out (exit 2).
    NoPath(String),
    /// Filesystem problems, always with the offending path (exit 3).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::NoPath(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::NoPath(msg) => write!(f, "error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pfaco_core::Error> for CliError {
    fn from(err: pfaco_core::Error) -> Self {
        match err {
            pfaco_core::Error::NoPath => CliError::NoPath(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Parse an `x,y` node flag.
pub fn parse_xy(text: &str) -> Result<(i32, i32), CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("expected 'x,y', got {text:?}")));
    }
    let x = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad x coordinate in {text:?}")))?;
    let y = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad y coordinate in {text:?}")))?;
    Ok((x, y))
}
