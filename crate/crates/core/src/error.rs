use std::fmt;

/// Errors produced by the linear-algebra and inner-product routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Division by a zero quaternion.
    DivisionByZero,
    /// Matrix is singular or numerically singular (pivot below tolerance).
    Singular,
    /// Operation requires a Hermitian matrix and the input is not.
    NotHermitian { residual: f64 },
    /// Operation requires a square matrix.
    NotSquare { rows: usize, cols: usize },
    /// Incompatible dimensions.
    DimensionMismatch { expected: (usize, usize), got: (usize, usize) },
    /// Iterative method did not converge within its budget.
    NoConvergence { iterations: usize },
    /// The self-polar iteration ran out of budget; decrement norms attached.
    SelfPolarStalled { iterations: usize, history: Vec<f64> },
    /// The inner product space is degenerate where a nondegenerate one is required.
    DegenerateSpace,
    /// Quadratic form is not positive definite.
    NotPositiveDefinite { min_eigenvalue: f64 },
    /// Spectral radius at or above one; the Stein series diverges.
    Unstable { spectral_radius: f64 },
    /// The vectorized Stein system is singular (eigenvalue resonance).
    SingularSteinSystem,
    /// The scaffold metric requires a positive definite Stein solution.
    IndefiniteMetric { eigenvalues: Vec<f64> },
    /// A fundamental decomposition did not satisfy its defining properties.
    InvalidDecomposition(String),
    /// The decomposition has no positive or no negative direction to rotate.
    RotationUnavailable,
    /// Input is not a Krein space.
    NotKrein,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero quaternion"),
            Error::Singular => write!(f, "matrix is singular"),
            Error::NotHermitian { residual } => {
                write!(f, "matrix is not Hermitian (residual {residual:e})")
            }
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::DimensionMismatch { expected, got } => write!(
                f,
                "dimension mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::NoConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::SelfPolarStalled { iterations, .. } => {
                write!(f, "self-polar iteration stalled after {iterations} iterations")
            }
            Error::DegenerateSpace => write!(f, "inner product space is degenerate"),
            Error::NotPositiveDefinite { min_eigenvalue } => {
                write!(f, "matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")
            }
            Error::Unstable { spectral_radius } => {
                write!(f, "spectral radius {spectral_radius} is not below one")
            }
            Error::SingularSteinSystem => write!(f, "Stein system is singular"),
            Error::IndefiniteMetric { eigenvalues } => {
                write!(f, "Stein solution is not positive definite: {eigenvalues:?}")
            }
            Error::InvalidDecomposition(msg) => write!(f, "invalid decomposition: {msg}"),
            Error::RotationUnavailable => {
                write!(f, "decomposition has no positive/negative pair to rotate")
            }
            Error::NotKrein => write!(f, "space is not a Krein space"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
