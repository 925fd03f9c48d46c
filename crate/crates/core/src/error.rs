use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("inconsistent model: {0}")]
    InconsistentModel(String),

    #[error("polynomial degree {degree} exceeds configured maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    /// A mathematical property the exact machinery relies on was violated
    /// (missing real roots, repeated roots, node-count mismatch, ...).
    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error("state nu={nu} with l={l} is not bound at beta={beta}")]
    UnboundState { beta: f64, l: u32, nu: u32 },

    #[error("no convergence: {message} (best estimate {best:?})")]
    Convergence { message: String, best: Option<f64> },

    #[error("beta={beta} lies outside the exact-point range [{lo}, {hi}]")]
    Extrapolation { beta: f64, lo: f64, hi: f64 },

    #[error("interpolation needs at least 2 points, curve has {0}")]
    TooFewPoints(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::InconsistentModel(_)
            | Error::Extrapolation { .. }
            | Error::TooFewPoints(_) => 1,
            Error::Integrity(_) | Error::DegreeOverflow { .. } => 2,
            Error::UnboundState { .. } | Error::Convergence { .. } => 3,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        }
    }
}
