use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("structure constants are not antisymmetric at [{a},{b}] (component {k})")]
    NotAntisymmetric { a: usize, b: usize, k: usize },
    #[error("Jacobi identity fails for basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("J² ≠ −Id at entry ({0}, {1})")]
    JSquaredNotMinusIdentity(usize, usize),
    #[error("metric is not symmetric at ({0}, {1})")]
    MetricNotSymmetric(usize, usize),
    #[error("metric is not positive definite (leading minor {0} ≤ 0)")]
    MetricNotPositiveDefinite(usize),
    #[error("metric is not J-invariant at ({0}, {1})")]
    MetricNotHermitian(usize, usize),
    #[error("2-form is not antisymmetric at ({0}, {1})")]
    FormNotAntisymmetric(usize, usize),
    #[error("2-form is degenerate")]
    DegenerateForm,
    #[error("2-form does not tame J (induced metric fails positivity at minor {0})")]
    NotTamed(usize),
    #[error("dimension {0} is not a positive even integer")]
    OddDimension(usize),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("W4 projection needs complex dimension n ≥ 2 (got n = {0})")]
    DegenerateDimension(usize),
    #[error("structure is not quasi-Kähler")]
    NotQuasiKahler,
    #[error("structure is not almost-Kähler")]
    NotAlmostKahler,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("no pivot with nonzero third coefficient; contradicts the Jacobi argument")]
    PivotNotFound,
    #[error("expected real dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("syntax error at {path}: {message}")]
    Syntax { path: String, message: String },
}

impl Error {
    /// Attaches a document field path to a syntax error.
    pub fn at(self, path: impl Into<String>) -> Self {
        match self {
            Error::Syntax { message, .. } => Error::Syntax { path: path.into(), message },
            other => other,
        }
    }
}
