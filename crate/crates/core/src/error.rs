use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p^k = {p}^{k} does not fit the residue word")]
    ModulusTooLarge { p: u64, k: u32 },
    #[error("invalid ring specification: {0}")]
    InvalidSpec(String),
    #[error("operands live in different rings")]
    SpecMismatch,
    #[error("monomial index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid ring homomorphism: {0}")]
    InvalidHom(String),
    #[error("{0} is not a unit mod p^k")]
    NonUnit(u64),
    #[error("denominator is zero at working precision")]
    ZeroDenominator,
    #[error("denominator could not be certified as a non-zero-divisor")]
    UncertifiedDenominator,
    #[error("presentation must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("incompatible specs for lifting: {0}")]
    IncompatibleSpecs(String),
    #[error("unsupported shift regime: {0}")]
    UnsupportedShift(String),
    #[error("declared generator does not generate the Fitting ideal of P_{0}")]
    GeneratorMismatch(usize),
    #[error("invalid decomposition data: {0}")]
    InvalidDecomposition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
