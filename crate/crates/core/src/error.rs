use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A qubit budget or enumeration guard was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("{message}, line {line}")]
    Parse { line: usize, message: String },

    #[error("gate {position}: {source}")]
    AtGate {
        position: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Raised when an iteration count is requested for a search with nothing to find.
    #[error("no marked states: {0}")]
    NoMarkedStates(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
