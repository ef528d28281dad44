use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or input files; exit code 2.
    #[error("{0}")]
    Invalid(String),
    /// A computed check did not hold; exit code 3.
    #[error("internal check failed: {0}")]
    Check(String),
    /// Output could not be written; exit code 1.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Check(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<thermgraph_core::Error> for CliError {
    fn from(e: thermgraph_core::Error) -> Self {
        match e {
            thermgraph_core::Error::CheckFailed(msg) => CliError::Check(msg),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
