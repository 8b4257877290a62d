use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke a documented precondition (asymmetric matrix, bad index, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unphysical covariance matrix: smallest symplectic eigenvalue {min_symplectic:.3e} < 1/2")]
    Unphysical { min_symplectic: f64 },

    #[error("numerical conditioning failure: {0}")]
    Conditioning(String),

    /// The interaction matrix is not positive definite.
    #[error("invalid model: {0}")]
    Model(String),

    #[error("near-degenerate normal modes {0:.12} and {1:.12}: secular structure ill-defined")]
    Degenerate(f64, f64),

    #[error("mode {mode} (frequency {frequency:.6}) is not damped by any bath; no stationary state")]
    NoSteadyState { mode: usize, frequency: f64 },

    #[error("quadrature did not converge: achieved error {achieved:.3e} > requested {requested:.3e} after {panels} panels")]
    Quadrature {
        achieved: f64,
        requested: f64,
        panels: usize,
    },

    #[error("dynamical instability: {0}")]
    Instability(String),

    #[error("integration failure: {0}")]
    Integration(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line harness.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) => 2,
            Error::Io(_) | Error::Csv(_) => 1,
            _ => 3,
        }
    }
}
