use thiserror::Error;

/// Errors raised by the library. Verdicts are never guessed: anything that
/// cannot be decided within budget surfaces as [`Error::Resource`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("arithmetic error: {message}")]
    Arithmetic {
        message: String,
        /// Decimal rendering of the offending common factor, when there is one.
        common_factor: Option<String>,
    },

    #[error("resource budget exceeded: {what} needs about {estimate}, limit is {limit}")]
    Resource { what: String, estimate: String, limit: u64 },

    #[error("invalid hypergraph: {0}")]
    Validation(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, estimate: impl ToString, limit: u64) -> Self {
        Error::Resource {
            what: what.into(),
            estimate: estimate.to_string(),
            limit,
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
