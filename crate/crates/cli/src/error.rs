//! Failure classes and their process exit codes.

/// Error carried up to `main`, tagged with how the process should exit.
#[derive(thiserror::Error, Debug)]
pub enum CliError {
    /// Bad flags or arguments (exit 2).
    #[error("usage error: {0}")]
    Usage(String),
    /// Unreadable or invalid configuration, malformed input CSV, I/O (exit 3).
    #[error("configuration error: {0}")]
    Config(String),
    /// An engine failed numerically (exit 4).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<swipt_noma::Error> for CliError {
    fn from(e: swipt_noma::Error) -> Self {
        use swipt_noma::Error as E;
        match e {
            E::InvalidConfig(_) | E::InfeasibleSic { .. } => CliError::Config(e.to_string()),
            E::InvalidArgument(_) => CliError::Usage(e.to_string()),
            E::Domain { .. } | E::NonConvergence { .. } | E::DegenerateFit(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("malformed CSV: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
