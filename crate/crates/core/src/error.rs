use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported (halving is undefined)")]
    EvenCharacteristic,
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("field of order {p}^{n} is too large")]
    FieldTooLarge { p: u32, n: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("subfield degree {sub} does not divide {n}")]
    NotADivisor { sub: usize, n: usize },
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("interpolation table incomplete: {0}")]
    IncompleteTable(String),
    #[error("not a Dembowski-Ostrom polynomial")]
    NotDembowskiOstrom,
    #[error("{0} is not a permutation")]
    NotPermutation(&'static str),
    #[error("{0} is not affine")]
    NotAffine(&'static str),
    #[error("{0} is not linearized")]
    NotLinearized(&'static str),
    #[error("zero element is not allowed here: {0}")]
    ZeroArgument(&'static str),
    #[error("product has zero divisors")]
    ZeroDivisors,
    #[error("product is not commutative")]
    NotCommutative,
    #[error("function is not planar")]
    NotPlanar,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("code dimension {dim} exceeds enumeration cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("codes are not comparable: {0}")]
    IncompatibleCodes(String),
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        }
    }
}
