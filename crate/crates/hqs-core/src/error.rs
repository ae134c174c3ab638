use thiserror::Error;

/// Errors surfaced by state construction, sampling, selection, and experiments.
#[derive(Debug, Error)]
pub enum HqsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("cannot normalize: input norm {norm:e} is below 1e-9")]
    NotNormalizable { norm: f64 },

    #[error("measurement basis is not orthonormal: |<{i}|{j}>| deviates by {deviation:e}")]
    NotOrthonormal { i: usize, j: usize, deviation: f64 },

    #[error("outcome labels must be unique: {0:?} appears more than once")]
    DuplicateLabel(String),

    #[error("label count {labels} does not match basis size {basis}")]
    LabelCountMismatch { labels: usize, basis: usize },

    #[error("mixture keep-probability must lie in [0, 1], got {0}")]
    KappaOutOfRange(f64),

    #[error("strategy requires a hidden source matching the system: {0}")]
    StrategyMismatch(String),

    #[error("empirical conditioning starved at rank {rank} after {retries} band widenings")]
    ConditioningStarved { rank: usize, retries: usize },

    #[error("sequential measurement length must be even, got {0}")]
    OddSequenceLength(usize),

    #[error("photon number {0} exceeds the desk-scale cap of {max}", max = crate::experiments::MAX_PHOTONS)]
    PhotonCapExceeded(usize),

    #[error("invalid experiment config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, HqsError>;
