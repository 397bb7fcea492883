use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: unknown or missing key, unparsable value, malformed config.
    #[error("invalid configuration: {0}")]
    Validation(String),
    /// The library rejected a well-formed request on physical or numerical grounds.
    #[error("{0}")]
    Numerical(#[from] quanton::Error),
    #[error("non-finite result '{0}'")]
    NonFinite(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::NonFinite(_) | CliError::Io(_) => 1,
        }
    }
}

pub(crate) fn invalid(key: &str, detail: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("parameter '{key}': {detail}"))
}

pub type CliResult<T> = std::result::Result<T, CliError>;
