use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiracError {
    #[error("spin label must be +1 or -1, got {0}")]
    InvalidSpin(i32),
    #[error("energy vanishes at this momentum (massless rest mode has no spinor)")]
    ZeroEnergy,
    #[error("grid must have a power-of-two point count >= 8 and positive length (n = {n_points}, length = {length})")]
    InvalidGrid { n_points: usize, length: f64 },
    #[error("grid mismatch: expected {expected} points, got {found}")]
    GridMismatch { expected: usize, found: usize },
    #[error("potential has {found} samples but grid has {expected}")]
    PotentialSize { expected: usize, found: usize },
    #[error("operation requires a stationary potential")]
    NotStationary,
    #[error("dense decomposition limited to {max} grid points, got {requested}")]
    GridTooLarge { requested: usize, max: usize },
    #[error("discretized Hamiltonian is not hermitian (residual {0:e})")]
    NonHermitian(f64),
    #[error("eigenvalue {0:e} lies in the zero-mode band and cannot be assigned a frequency sign")]
    ZeroMode(f64),
    #[error("expected a {expected} field, got a {found} field")]
    WrongSpecies {
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),
    #[error("projection onto the stationary positive branch requires a spectral decomposition")]
    SpectrumUnavailable,
    #[error("trajectory needs at least {needed} snapshots, got {found}")]
    TooFewSnapshots { needed: usize, found: usize },
    #[error("field norm {0:e} too small for expectation values")]
    VanishingNorm(f64),
    #[error("energy {energy} must exceed the rest energy {rest}")]
    BelowRestEnergy { energy: f64, rest: f64 },
    #[error("packet cannot be represented on this grid: {0}")]
    UnresolvablePacket(String),
    #[error("scenario precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, DiracError>;
