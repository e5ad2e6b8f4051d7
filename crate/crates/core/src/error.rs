use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed diagram: {0}")]
    Structure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("semantic error at line {line}: {message} `{id}`")]
    Semantic {
        line: usize,
        id: String,
        message: String,
    },
    #[error("inconsistent coorientation: region {region} reached with values {first} and {second}")]
    Consistency {
        region: String,
        first: String,
        second: String,
    },
    #[error("vanishing triangle indices {0:?} match neither the weak nor the strong pattern")]
    Classification([String; 3]),
    #[error("step {step}: {reason}")]
    Transition { step: usize, reason: String },
    #[error("internal consistency: {0}")]
    Internal(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("sampling resolution {resolution} insufficient: {reason}")]
    Resolution { resolution: usize, reason: String },
}

impl Error {
    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
