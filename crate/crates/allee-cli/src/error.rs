//! Error type carrying the exit-code contract.

use std::fmt;

/// One variant per nonzero exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// A verification check failed (`verify` subcommand). Exit code 1.
    Verification(String),
    /// Invalid parameters, window, bracket, or flag combination. Exit code 2.
    Validation(String),
    /// Filesystem failure while writing outputs. Exit code 3.
    Io(String),
    /// A numeric procedure (integration, section crossing, refinement)
    /// failed. Exit code 4.
    Numeric(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Wrapped core errors already carry a self-describing prefix; only
        // the verification and I/O classes need one added here.
        match self {
            CliError::Verification(msg) => write!(f, "verification failed: {msg}"),
            CliError::Validation(msg) | CliError::Numeric(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<allee_core::Error> for CliError {
    fn from(err: allee_core::Error) -> Self {
        use allee_core::Error;
        match &err {
            // Bad inputs or unmet structural preconditions: the caller asked
            // for something the parameter point does not support.
            Error::InvalidParameter(_) | Error::Precondition(_) => {
                CliError::Validation(err.to_string())
            }
            // Everything else is a numeric procedure giving up mid-flight.
            Error::NonFinite(_)
            | Error::SingularState(_)
            | Error::Stiffness { .. }
            | Error::SectionMiss { .. }
            | Error::TangentialCrossing { .. } => CliError::Numeric(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}
