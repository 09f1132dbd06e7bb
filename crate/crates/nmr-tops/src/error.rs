use thiserror::Error;

/// Errors reported by the simulation and model layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("qubit count {0} outside the supported range 1..=8 of the dense engine")]
    QubitCount(usize),

    #[error("epsilon {0} outside [0, 1]")]
    EpsilonRange(f64),

    #[error("alpha must be positive, got {0}")]
    AlphaRange(f64),

    #[error("theta {0} outside (0, 1]")]
    ThetaRange(f64),

    #[error("matrix is not unitary (max deviation {deviation:.3e} exceeds {tolerance:.1e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid Pauli string: {0}")]
    InvalidPauliString(String),

    #[error("invalid spin configuration: {0}")]
    InvalidSpinConfig(String),

    #[error("hidden model inapplicable: epsilon {epsilon:.6e} exceeds {limit:.6e}")]
    ModelInapplicable { epsilon: f64, limit: f64 },

    #[error("rejection bound violated: density {density:.6e} exceeds stated bound {bound:.6e}")]
    BoundViolation { density: f64, bound: f64 },

    #[error("rejection acceptance rate fell below {floor:.1e} ({attempts} proposals without acceptance)")]
    AcceptanceFloor { floor: f64, attempts: u64 },

    #[error("negative density {0:.6e} passed to the rejection sampler")]
    NegativeDensity(f64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
