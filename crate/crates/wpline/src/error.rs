use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("series is not topologically nilpotent in its truncated variables: {0}")]
    NotNilpotent(String),
    #[error("expected constant term {expected}, found {found}")]
    ConstantTerm { expected: String, found: String },
    #[error("exponent {exp} of `{var}` lies below the declared floor {floor}")]
    FloorViolation { var: String, exp: i32, floor: i32 },
    #[error("cannot add series carrying different powers of sqrt(2 pi): {0} vs {1}")]
    TwoPiMismatch(i32, i32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("requested order {requested} exceeds the precision {available} carried by the input")]
    PrecisionExceeded { requested: i32, available: i32 },
    #[error("product of two transcendental parts is outside the supported basis")]
    TranscendentalProduct,
    #[error("energy cutoff {0} exceeded")]
    CutoffExceeded(usize),
    #[error("not enough power sums: need {need}, got {got}")]
    NotEnoughPowerSums { need: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
