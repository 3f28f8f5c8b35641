use thiserror::Error;

/// Errors raised by the simulator, the oracles and the theory layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ring needs at least 2 sites, got {0}")]
    RingTooSmall(usize),
    #[error("site {site} out of range for a ring of {n} sites")]
    SiteOutOfRange { site: usize, n: usize },
    #[error("drop requires at least 2 empty sites, {empty} left")]
    RingFull { empty: usize },
    #[error("drop count {m} out of range 1..={max}")]
    DropCountOutOfRange { m: usize, max: usize },
    #[error("invalid walk: size {size}, start {start}")]
    InvalidWalk { size: u64, start: u64 },
    #[error("walk started at the clockwise boundary cannot exit counterclockwise")]
    ImpossibleExit,
    #[error("need at least 2 clusters to merge, have {0}")]
    TooFewClusters(usize),
    #[error("exact computation limited to n <= {max}, got {n}")]
    TooLargeForExact { n: usize, max: usize },
    #[error("no reachable state matches the query")]
    Unreachable,
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
