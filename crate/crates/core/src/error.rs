use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("exponent overflow: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty poset: {0}")]
    EmptyPoset(String),

    #[error("bound vector too small: {0}")]
    Bound(String),

    /// Box volume, brute-force size cap, or search budget exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

impl Error {
    /// True for errors caused by a size or time budget rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
