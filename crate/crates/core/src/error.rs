use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("composition is indeterminate (a denominator vanishes identically)")]
    IndeterminateComposition,
    #[error("form degree would exceed 3")]
    DegreeOverflow,
    #[error("arity error: {0}")]
    Arity(String),
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("map is not dominant (jacobian determinant vanishes identically)")]
    NonDominant,
    #[error("internal inconsistency in the contact equations: {0}")]
    InconsistentPde(String),
    #[error("map does not preserve the contact structure")]
    NotContact,
    #[error("map belongs to the Klein family (alpha is infinite)")]
    KleinFamily,
    #[error("the hyperplane at infinity is moved off itself")]
    HInftyMoved,
    #[error("no valid sample point found on the hyperplane at infinity")]
    AllSamplesIndeterminate,
    #[error("form is not closed")]
    NotClosed,
    #[error("plane map does not preserve dz0^dz1 (jacobian determinant is {0})")]
    NotEtaPreserving(String),
    #[error("not a polynomial automorphism: {0}")]
    NotPolynomialAutomorphism(String),
    #[error("map is not periodic of the requested order: {0}")]
    NotPeriodic(String),
    #[error("degenerate embedding: {0}")]
    DegenerateEmbedding(String),
    #[error("singular fraction (determinant vanishes)")]
    SingularFraction,
    #[error("parameter constraint violated: {0}")]
    UpsilonViolation(String),
    #[error("scale parameters must be nonzero")]
    ZeroScale,
    #[error("degree window too small: need at least 4, got {0}")]
    WindowTooSmall(usize),
    #[error("unknown catalog entry: {0}")]
    UnknownEntry(String),
    #[error("catalog format error at line {line}: {message}")]
    CatalogFormat { line: usize, message: String },
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Failures that indicate a bug or corrupted data rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::InconsistentPde(_) | Error::Internal(_) | Error::HInftyMoved)
    }
}
