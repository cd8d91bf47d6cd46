use num_bigint::BigUint;
use thiserror::Error;

/// Why a polynomial failed the primitivity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimitivityFailure {
    /// Constant term is zero, so `x` divides the polynomial.
    ZeroConstantTerm,
    /// The polynomial factors over GF(2).
    Reducible,
    /// Irreducible, but `X^((2^d - 1) / p) = 1` for the recorded prime `p`.
    ProperOrder { prime: BigUint },
}

impl std::fmt::Display for PrimitivityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrimitivityFailure::ZeroConstantTerm => write!(f, "constant term is zero"),
            PrimitivityFailure::Reducible => write!(f, "polynomial is reducible"),
            PrimitivityFailure::ProperOrder { prime } => write!(
                f,
                "irreducible but the order of X is a proper divisor of 2^d-1 (fails at prime {prime})"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus is the zero polynomial")]
    ZeroModulus,
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("polynomial must have degree >= 1")]
    DegreeZero,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("word size {m} does not divide degree {degree}")]
    WordSizeDoesNotDivide { m: usize, degree: usize },
    #[error("word size {0} is out of range 1..=64")]
    WordSizeRange(usize),
    #[error("factorization of 2^{d}-1 unavailable: {reason}")]
    FactorizationUnavailable { d: usize, reason: String },
    #[error("factor table: {0}")]
    FactorTable(String),
    #[error("not primitive: {0}")]
    NotPrimitive(PrimitivityFailure),
    #[error("tap count k={k} outside [2, {max}]")]
    TapCountRange { k: usize, max: usize },
    #[error("no primitive polynomial found in {attempts} attempts")]
    AttemptsExhausted { attempts: usize },
    #[error("matrix dimension {dim} exceeds oracle bound {bound}; supply a factor table and a smaller dimension, or use the orbit check")]
    OracleBound { dim: usize, bound: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("seed must contain exactly {expected} words, got {found}")]
    SeedLength { expected: usize, found: usize },
    #[error("seed word {word:#x} does not fit in {m} bits")]
    WordOverflow { word: u64, m: usize },
    #[error("all-zero seed is a fixed point of the generator")]
    ZeroSeed,
    #[error("brute-force bound exceeded: m*n = {mn} > {bound}")]
    BruteForceBound { mn: usize, bound: usize },
    #[error("algebraic and orbit period checks disagree (primitive={primitive}, orbit={orbit}); this is an implementation bug")]
    PeriodInconsistency { primitive: bool, orbit: u64 },
    #[error("{d:#x} is not divisible by 2^{l}")]
    NotDivisible { d: u64, l: u32 },
    #[error("trace budget exceeded: n*l = {len} > {bound}")]
    TraceBudget { len: usize, bound: usize },
    #[error("m*n = {mn} does not divide phi(2^mn - 1); the factorization is wrong")]
    CensusViolation { mn: usize },
    #[error("malformed matrix polynomial: {0}")]
    MalformedMatrixPolynomial(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("operation cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;
