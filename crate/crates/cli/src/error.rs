use std::process::ExitCode;

/// Failure classes of the command-line tool, one per exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<cavent_core::Error> for CliError {
    fn from(e: cavent_core::Error) -> Self {
        use cavent_core::Error as E;
        match e {
            E::DegenerateDispersive { .. }
            | E::InvalidParameter { .. }
            | E::Truncation { .. }
            | E::DimensionGuard { .. } => CliError::Invalid(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
