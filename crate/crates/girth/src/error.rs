use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument must be positive")]
    ZeroArgument,
    #[error("no prime in interval [{0}, {1}]")]
    NoPrimeInInterval(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over its base field")]
    ReducibleModulus,
    #[error("inversion of zero field element")]
    ZeroInversion,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("polynomial division by zero")]
    DivisionByZeroPoly,
    #[error("constant polynomial has no irreducibility status")]
    ConstantPolynomial,
    #[error("polynomial has no variables")]
    NoVariables,
    #[error("syntax error at byte {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("variable index {0} out of range (k = {1})")]
    VariableIndexOutOfRange(usize, usize),
    #[error("spec file schema error: {0}")]
    SchemaError(String),
    #[error("generator matrix is not {0}x{0}")]
    NonSquareMatrix(usize),
    #[error("generator is singular (determinant = 0)")]
    SingularGenerator,
    #[error("characteristic must be 0 or a prime")]
    BadCharacteristic,
    #[error("ball enumeration exceeded element budget ({0})")]
    BallBudgetExceeded(u64),
    #[error("quotient search exceeded candidate budget ({0})")]
    SearchBudgetExceeded(u64),
    #[error("reduction annihilates a denominator")]
    DenominatorVanishes,
    #[error("zero polynomial cannot survive in any quotient")]
    ZeroPolynomial,
    #[error("exponent fit window contains fewer than 3 points")]
    DegenerateWindow,
    #[error("prime {0} exceeds the supported characteristic range")]
    PrimeTooLarge(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
