use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is not hyperbolic unimodular: {0}")]
    Hypothesis(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("I/O error on {0}: {1}")]
    Io(String, #[source] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Hypothesis(_) => 3,
            CliError::Io(..) => 4,
        }
    }
}
