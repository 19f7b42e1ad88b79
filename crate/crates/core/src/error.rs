use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Unknown generator, malformed graph, or operands from different graphs.
    #[error("presentation error: {0}")]
    Presentation(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A mathematical invariant the toolkit relies on did not hold. Never
    /// papered over: the operation that detects it aborts.
    #[error("internal invariant failed: {0}")]
    InternalInvariant(String),

    #[error("scl bound not applicable: {0}")]
    NotApplicable(String),

    #[error("oracle: {0}")]
    Oracle(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
