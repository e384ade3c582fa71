use alloc::string::String;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty network")]
    EmptyNetwork,
    #[error("time span of {years} years cannot be split into {slices} slices")]
    TooFewYears { years: u32, slices: usize },
    #[error("invalid edge {a}-{b}: {reason}")]
    InvalidEdge { a: usize, b: usize, reason: &'static str },
    #[error("duplicate author key")]
    DuplicateAuthor,
    #[error("clustering covers {got} vertices, network has {expected}")]
    ClusteringSizeMismatch { expected: usize, got: usize },
    #[error("cluster {0} is not connected")]
    DisconnectedCluster(u32),
    #[error("unknown cluster id {0}")]
    UnknownCluster(u32),
    #[error("centralization undefined for {0} nodes")]
    CentralizationUndefined(usize),
    #[error("participation coefficient {0} outside [0, 1]")]
    ParticipationOutOfRange(f64),
    #[error("non-finite within-module z-score")]
    NonFiniteZ,
    #[error("cluster with no activity")]
    NoActivity,
    #[error("expected activity over 3 time slices, got {0}")]
    SliceCountMismatch(usize),
    #[error("degenerate series")]
    DegenerateSeries,
    #[error("series need equal length of at least 3 (got {0} and {1})")]
    SeriesLength(usize, usize),
    #[error("invalid contingency table: {0}")]
    InvalidTable(&'static str),
    #[error("inconsistent planted spec: {0}")]
    InconsistentSpec(String),
    #[error("trials must be at least 1")]
    NoTrials,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
