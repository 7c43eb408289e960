use thiserror::Error;

/// Errors raised while building structures, encoding eigendata or solving.
///
/// An inconsistent linear system is not an error: it is reported through
/// [`crate::solver::SolveOutcome`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown structure kind `{0}`")]
    UnknownStructure(String),

    #[error("structure `{kind}` needs n >= {min}, got n = {n}")]
    OrderTooSmall { kind: &'static str, n: usize, min: usize },

    #[error("custom structures must be loaded from an explicit list of basis matrices")]
    CustomNeedsMatrices,

    #[error("basis list is empty")]
    EmptyBasis,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("basis matrices are linearly dependent (rank {rank} < {count})")]
    LinearlyDependent { rank: usize, count: usize },

    #[error("matrix is not in the structure: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NotInStructure { residual: f64, tolerance: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("eigenvector {index} is zero")]
    ZeroEigenvector { index: usize },

    #[error("eigenpair {index} has a real eigenvalue but a complex eigenvector (imaginary norm {imag_norm:.3e})")]
    ComplexVectorForRealEigenvalue { index: usize, imag_norm: f64 },

    #[error("eigenpairs {first} and {second} are a conjugate pair; supply only one member of each pair")]
    DuplicateConjugate { first: usize, second: usize },

    #[error("malformed real-form eigendata: {0}")]
    MalformedBlocks(String),

    #[error("number of eigencolumns m = {m} must satisfy 1 <= m <= k*n = {bound}")]
    ProblemBound { m: usize, bound: usize },

    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("coefficient index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("matrix is not symmetric (asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("leading coefficient is not positive definite (eigenvalue ratio {ratio:.3e})")]
    NotPositiveDefinite { ratio: f64 },

    #[error("tolerance `{name}` must be strictly positive, got {value}")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("cannot select {m} eigencolumns from the available eigenpairs")]
    Selection { m: usize },

    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
