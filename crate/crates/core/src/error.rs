use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("cyclotomic order {0} exceeds the supported maximum")]
    OrderTooLarge(u64),
    #[error("strand mismatch: expected {expected}, found {found}")]
    StrandMismatch { expected: usize, found: usize },
    #[error("quantum integer Delta_{j} vanishes, so JW_{k} is undefined")]
    VanishingQuantumInteger { k: usize, j: usize },
    #[error("tangle is not closed ({0} open endpoints)")]
    NotClosed(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("label {label} out of range 0..={max}")]
    LabelOutOfRange { label: u32, max: u32 },
    #[error("boundary data mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("vector is not in the span of the tree basis: {0}")]
    NotInSpan(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("move pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("board is not roomy: {0}")]
    NotRoomy(String),
    #[error("pull-tight search exhausted: {0}")]
    PullTightExhausted(String),
    #[error("full tensor space over {edges} edges exceeds the cap of {cap} edges; use pictureBasis mode")]
    CapExceeded { edges: usize, cap: usize },
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("ground space dimension changed from {expected} to {found} at step {step}, substep {substep}")]
    DimensionJump {
        step: usize,
        substep: usize,
        expected: usize,
        found: usize,
    },
    #[error("ill-conditioned overlap at step {step} (smallest singular value {sigma:e}); use more substeps")]
    IllConditioned { step: usize, sigma: f64 },
    #[error("sites are not adjacent on the midpoint lattice: {0}")]
    NotAdjacent(String),
    #[error("no collision-free schedule: {0}")]
    NoSchedule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
