use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}; expected 2, 4 or 8")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("kronecker product of {0}x{0} would exceed 8x8")]
    DimensionTooLarge(usize),
    #[error("invalid qubit index {0}; expected 1, 2 or 3")]
    InvalidQubit(usize),
    #[error("qubit indices must differ, got {0} twice")]
    SameQubit(usize),
    #[error("partial trace must keep one or two qubits, got {0}")]
    InvalidKeepSet(usize),
    #[error("amplitude vector has zero norm")]
    ZeroNorm,
    #[error("d and d' are not orthogonal (d.d' = {0:e})")]
    NotOrthogonal(f64),
    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("expectation value has imaginary part {0:e}; observable is not hermitian")]
    NonHermitian(f64),
    #[error("restart budget must be at least 1")]
    ZeroBudget,
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
}
