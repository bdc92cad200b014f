use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (|H - H^dagger| = {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("operator is singular or too ill-conditioned (condition number {condition:.3e})")]
    Singular { condition: f64 },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid Fock cutoff {0}: need n_max >= 1")]
    InvalidCutoff(usize),

    #[error("vector is not cyclic for the algebra (rank {rank} < dimension {dim})")]
    NotCyclic { rank: usize, dim: usize },

    #[error("vector is not separating for the algebra (rank {rank} < algebra dimension {algebra_dim})")]
    NotSeparating { rank: usize, algebra_dim: usize },

    #[error("image of the cyclic vector is ill-conditioned (condition number {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("parameter `{name}` must be non-negative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: last two refinements {previous:.12e} and {current:.12e}")]
    QuadratureNotConverged { previous: f64, current: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}
