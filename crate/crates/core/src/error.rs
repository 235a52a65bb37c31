use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Text input could not be parsed; `pos` is a byte offset into the input.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A special slope was handed to a reduction that needs a general one.
    #[error("slope {0} is special and cannot be reduced")]
    NotReducible(String),

    /// The hypothesis of a decision table is not met, so the verdict is undefined.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// The operation is not defined for this input (e.g. S1/S2 for r = 1/p).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A certificate or diagram is structurally malformed.
    #[error("malformed diagram: {0}")]
    Structural(String),

    /// A precondition of the T-sequence transform fails.
    #[error("transform inapplicable: {0}")]
    TransformInapplicable(String),

    /// A cut-and-reglue move cannot be performed at the vertex.
    #[error("move inapplicable: {0}")]
    MoveInapplicable(String),

    /// The Riley polynomial vanishes identically.
    #[error("degenerate representation: {0}")]
    Degenerate(String),

    /// An internal consistency check failed. This indicates a bug.
    #[error("internal invariant failure: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
