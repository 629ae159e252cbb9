use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group too large: order exceeds bound {bound}")]
    GroupTooLarge { bound: usize },
    #[error("resource bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid graph of groups: {}", .0.join("; "))]
    InvalidGraph(Vec<String>),
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("witness search failed: {0}")]
    WitnessSearch(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by configured size limits rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::GroupTooLarge { .. } | Error::BoundExceeded(_) | Error::WitnessSearch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
