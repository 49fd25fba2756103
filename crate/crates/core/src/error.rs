use thiserror::Error;

/// Errors raised by the geometry, linear-algebra and file layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid dimension {0}: must be at least 2")]
    InvalidDimension(usize),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: residual {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("trace deviates from one by {deviation:.3e}")]
    TraceDeviation { deviation: f64 },

    #[error("matrix is not positive definite: min eigenvalue {min_eigenvalue:.3e} <= {eps:.1e}")]
    NotPositiveDefinite { min_eigenvalue: f64, eps: f64 },

    #[error("Hamiltonian flagged traceless has trace {trace:.3e}")]
    NotTraceless { trace: f64 },

    #[error("matrix is not unitary: residual {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:.3e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("exponent {exponent:.3e} exceeds the representable range")]
    Overflow { exponent: f64 },

    #[error("inverse temperature must be positive, got {0}")]
    InvalidTemperature(f64),

    #[error("invalid basis label {label} for dimension {dim}")]
    InvalidLabel { label: String, dim: usize },

    #[error("Bloch vector of radius {radius} lies outside the open unit ball")]
    OutsideBall { radius: f64 },

    #[error("operation requires a qubit (dimension 2), got dimension {0}")]
    WrongDimension(usize),

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid simplex vector: {0}")]
    InvalidSimplex(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
