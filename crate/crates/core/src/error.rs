use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("`{0}` is not a unit (needs a monomial in invertible even variables plus a nilpotent)")]
    NotAUnit(String),
    #[error("parity mismatch substituting `{var}`: expected {expected}")]
    ParityMismatch { var: String, expected: String },
    #[error("odd variable `{0}` cannot be invertible")]
    InvertibleOddVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{name}` at {line}:{column}")]
    UnknownVariable {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("odd variable `{0}` cannot be declared invertible")]
    InvertibleOddVariable(String),
    #[error("negative power of non-invertible `{name}` at {line}:{column}")]
    NegativePowerOfNonInvertible {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("cannot evaluate at {line}:{column}: {message}")]
    Evaluation {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("reduction of the {0} block is singular")]
    SingularReduction(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("divisor is not monic in the fiber coordinate with fiber-free coefficients")]
    NonMonicDivisor,
    #[error("odd rank {q} exceeds even rank {p}")]
    RankOrderViolation { p: usize, q: usize },
    #[error("polynomial is not in the fiber ring: {0}")]
    NotInFiberRing(String),
    #[error("malformed ideal data: {0}")]
    Shape(String),
    #[error("self-check failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("ideals live on different fibers: {0} vs {1}")]
    ChartMismatch(String, String),
    #[error("not canonicalizable: {0}")]
    NotCanonicalizable(String),
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("no transition {0} -> {1}")]
    MissingTransition(String, String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("even rule for `{0}` has odd degree above two")]
    HigherOrderTerms(String),
    #[error("obstruction data has unexpected shape: {0}")]
    Shape(String),
    #[error("support reasoning could not decide: {0}")]
    Undecided(String),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
