use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration or generator parameter failed validation.
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParameter { field: &'static str, message: String },

    /// A graph file could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot build a recommender from an empty rating data model")]
    EmptyData,

    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            message: message.into(),
        }
    }

    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by bad user input (CLI exit code 1),
    /// false for runtime failures (exit code 2).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::Scenario(_) | Error::UndefinedInput(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
