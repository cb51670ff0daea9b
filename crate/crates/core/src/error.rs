use thiserror::Error;

/// Errors raised by the simulation and estimation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("scale factor R = {0} is not alignable (must be finite and positive)")]
    NonAlignable(f64),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("linear solve failed at step {step}: {reason}")]
    SolveFailure { step: usize, reason: String },

    #[error("solution blew up at step {step} (max |u| = {max_abs})")]
    Diverged { step: usize, max_abs: f64 },

    #[error("time window [{from}, {to}) not contained in field range [{start}, {end}]")]
    WindowOutOfRange {
        from: f64,
        to: f64,
        start: f64,
        end: f64,
    },

    #[error("scale r = {r} is below the resolution floor {floor}")]
    BelowResolution { r: f64, floor: f64 },

    #[error("quadrature did not converge: estimated error {error:e} > tolerance {tolerance:e}")]
    QuadratureNonConvergence { error: f64, tolerance: f64 },

    #[error("covariance matrix is not positive semidefinite: {0}")]
    NotPositiveSemidefinite(String),

    #[error("degenerate statistic: {0}")]
    Degenerate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
