use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("degree {0} outside supported range")]
    DegreeOutOfRange(usize),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("singular model: discriminant is zero")]
    Singular,
    #[error("prime {0} divides 2*lc*disc")]
    BadPrime(u64),
    #[error("characteristic must be odd, got {0}")]
    EvenPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds counting cap {1}")]
    PrimeTooLarge(u64, u64),
    #[error("parity failure computing b at p = {0}")]
    ParityFailure(u64),
    #[error("incomplete factorization, unfactored part {0}")]
    PartialFactorization(String),
    #[error("prime {0} is ramified in the quadratic field")]
    Ramified(u64),
    #[error("{0} is not a discriminant")]
    NotDiscriminant(i64),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("search cap {cap} exhausted for form {form}")]
    SearchExhausted { cap: u64, form: String },
    #[error("root finding did not converge")]
    NoConvergence,
    #[error("missing satake transform")]
    MissingTransform,
    #[error("convention mismatch: expected {expected}, found {found}")]
    ConventionMismatch { expected: String, found: String },
    #[error("not weighted homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("not a cover: {0}")]
    NotACover(String),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}
