use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LadderError {
    /// A required λ_j² is negative: the parameters leave the real-λ representation.
    #[error("non-unitary regime: lambda_sq({j}) = {lambda_sq} < 0")]
    NonUnitaryRegime { j: i64, lambda_sq: f64 },

    #[error("overflow: {0}")]
    Overflow(String),

    /// Argument sits on (or within tolerance of) a pole of tan/sec.
    #[error("pole: {0}")]
    PoleError(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// |s| vanished in the rotation parametrization.
    #[error("singular rotation parametrization: |s| = {0:e}")]
    SingularS(f64),

    #[error("series did not converge: {0}")]
    ConvergenceError(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl LadderError {
    /// Domain errors are the ones caused by the mathematics of the input
    /// rather than by a malformed request.
    pub fn is_domain(&self) -> bool {
        !matches!(self, LadderError::InvalidWindow(_) | LadderError::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, LadderError>;
