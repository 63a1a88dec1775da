use thiserror::Error;

/// Crate-wide error type.
///
/// Degenerate measure outcomes (`DegenerateAri` and friends) are reported as
/// errors rather than sentinel values like 0 or 1, so callers can surface them
/// in-band without mistaking them for a real score.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("duplicate element id {0:?}")]
    DuplicateElement(String),

    #[error("element sets differ: {0}")]
    ElementSetMismatch(String),

    #[error("too few elements: {0}")]
    TooFewElements(String),

    #[error("tuple order must be at least 2 (got {0})")]
    OrderTooSmall(u32),

    #[error("tuple order {order} exceeds element count {n}")]
    OrderExceedsN { order: u32, n: u64 },

    #[error("invalid Renyi order: {0}")]
    InvalidOrder(String),

    #[error("adjusted Rand index undefined: expected and maximal pair agreement coincide")]
    DegenerateAri,

    #[error("Jaccard index undefined: no co-clustered pairs in either clustering")]
    DegenerateJaccard,

    #[error("Fowlkes-Mallows index undefined: a clustering has no co-clustered pairs")]
    DegenerateFm,

    #[error("normalized mutual information undefined: both clusterings are trivial")]
    DegenerateNmi,

    #[error("self-similarity normalization undefined: {0}")]
    DegenerateNormalization(String),

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("zero collision sum with lambda = 0: {0}")]
    ZeroCollision(String),

    #[error("bootstrap unstable: {skipped} of {total} replicates degenerate")]
    BootstrapUnstable { skipped: usize, total: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for outcomes that are properties of the data (an undefined score)
    /// rather than faults of the call. Bootstrap and report layers skip these
    /// instead of aborting.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateAri
                | Error::DegenerateJaccard
                | Error::DegenerateFm
                | Error::DegenerateNmi
                | Error::DegenerateNormalization(_)
                | Error::ZeroCollision(_)
        )
    }
}
