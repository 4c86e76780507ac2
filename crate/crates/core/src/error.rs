use thiserror::Error;

/// Failure modes split by exit-code category: `Validation` covers bad
/// inputs, bad config and violated preconditions (CLI exit 2), while
/// `Numeric` covers NaN/overflow, failed tolerance checks and
/// assumption violations detected mid-computation (CLI exit 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),
    #[error("numeric: {0}")]
    Numeric(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) => 2,
            Error::Numeric(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
