use thiserror::Error;

/// Errors raised while parsing the symbol DSL.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("variable `{name}` at position {pos} exceeds dimension n = {n}")]
    VariableOutOfRange { name: String, pos: usize, n: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid catalog request: {0}")]
    InvalidCatalog(String),
    #[error("matrix is not in u(n): skew-Hermitian defect {defect:e}")]
    NotUnitaryAlgebra { defect: f64 },
    #[error("symbol class tag inconsistent with expression: {0}")]
    ClassMismatch(String),
    #[error("Gauss-Hermite root finding did not converge for order {order}")]
    RootFinding { order: usize },
    #[error("quadrature did not converge: last refinement changed entries by {change:e} at order {order}")]
    QuadratureNotConverged { order: usize, change: f64 },
    #[error("shell {shell} block is not Hermitian (defect {defect:e})")]
    NotHermitian { shell: usize, defect: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    EigenNotConverged { sweeps: usize, off: f64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
