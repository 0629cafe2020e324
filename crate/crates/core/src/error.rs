use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("cavity index {site} outside 1..={num_cavities}")]
    SiteOutOfRange { site: usize, num_cavities: usize },

    #[error("invalid input state: {0}")]
    InvalidInput(String),

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("coincidence probability P({m},{n}) = {value:e} is negative beyond rounding")]
    NegativeProbability { m: usize, n: usize, value: f64 },

    #[error("two-photon sector dimension {dimension} exceeds the dense limit of {limit}")]
    SizeGuard { dimension: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the `cca` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            _ => 1,
        }
    }
}
