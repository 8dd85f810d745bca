use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Input that does not parse against a schema. Exit status 2.
    #[error("{0}")]
    Malformed(String),
    /// Well-formed input that fails a mathematical check. Exit status 1.
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::Invalid(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Malformed(_) => "malformed",
            CliError::Invalid(_) => "invalid",
        }
    }
}
