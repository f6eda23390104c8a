use std::fmt;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    /// Invalid parameters or flags.
    Usage(String),
    /// Enumeration budget exceeded.
    Budget(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Budget(_) => ExitCode::from(3),
            CliError::Io(_) => ExitCode::FAILURE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Budget(msg) => f.write_str(msg),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<potts_core::Error> for CliError {
    fn from(e: potts_core::Error) -> Self {
        match e {
            potts_core::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}
