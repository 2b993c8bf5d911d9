//! Error type shared by every module.

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A form index fell outside `1..=n`.
    #[error("form index {index} out of range 1..={n}")]
    FormIndexOutOfRange { index: usize, n: usize },

    /// A counterpart index fell outside `1..=m`.
    #[error("counterpart index {index} out of range 1..={m}")]
    CounterpartIndexOutOfRange { index: usize, m: usize },

    /// The same edge was supplied twice when building a skeleton.
    #[error("duplicate edge ({form}, {counterpart})")]
    DuplicateEdge { form: usize, counterpart: usize },

    /// Probabilities are undefined on a skeleton with no edges.
    #[error("distribution undefined: skeleton has no edges")]
    UndefinedDistribution,

    /// A parameter left its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A strategy-comparison precondition was violated.
    #[error("strategy restriction violated: {0}")]
    Restriction(String),

    /// Audit mode caught the incremental state drifting from a rebuild.
    #[error("entropy state diverged from rebuild: {field} off by {diff:e}")]
    StateDiverged { field: &'static str, diff: f64 },

    /// An exhaustive enumeration request exceeded its budget.
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    /// The skeleton text format could not be parsed.
    #[error("invalid skeleton text: {0}")]
    Parse(String),

    /// A sweep grid specification is unusable.
    #[error("invalid grid: {0}")]
    Grid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn restriction(msg: impl Into<String>) -> Self {
        Error::Restriction(msg.into())
    }

    pub(crate) fn grid(msg: impl Into<String>) -> Self {
        Error::Grid(msg.into())
    }
}
