use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid window: lo {lo} > hi {hi}")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("window of {len} cells exceeds the limit of {limit}")]
    WindowTooLarge { len: u64, limit: u64 },

    #[error("window contains no members")]
    EmptyWindow,

    #[error("subwindow length {sub} exceeds window length {len}")]
    SubwindowTooLong { sub: u64, len: u64 },

    #[error("{0}")]
    InvalidInput(String),

    #[error("operation requires an eventually periodic set")]
    NotEventuallyPeriodic,

    #[error("unsupported set representation for this operation")]
    UnsupportedRepresentation,

    #[error("set contains negative members")]
    NegativeMembers,

    #[error("level {level} of the tree is empty")]
    EmptyLevel { level: usize },

    #[error("search node budget of {limit} exhausted")]
    SearchNodesExceeded { limit: u64 },

    #[error("closure state budget of {limit} exhausted")]
    StateSpaceExceeded { limit: u64 },

    #[error("time budget of {budget_ms} ms exhausted")]
    TimeBudgetExceeded { budget_ms: u64 },

    #[error("internal verification failed: {0}")]
    InternalVerification(String),
}

impl Error {
    /// True for errors that mean "ran out of resources", as opposed to a
    /// domain error in the inputs.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::WindowTooLarge { .. }
                | Error::SearchNodesExceeded { .. }
                | Error::StateSpaceExceeded { .. }
                | Error::TimeBudgetExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
