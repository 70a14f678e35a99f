use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed target `{0}`: expected `x/2^n`, `x/<power of two>` or `<decimal>@<accuracy>`")]
    MalformedTarget(String),
    #[error("denominator {0} is not a power of two")]
    NotPowerOfTwo(String),
    #[error("concentration factor {0} is outside the open interval (0, 1)")]
    OutOfRange(String),
    #[error("decimal {value} is not representable with accuracy level {accuracy}")]
    NotDyadic { value: String, accuracy: u32 },
    #[error("accuracy level {0} is outside the supported range 1..={max}", max = crate::target::MAX_ACCURACY)]
    AccuracyOutOfRange(u32),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("no dyadic approximation within tolerance up to accuracy level {cap}")]
    ToleranceTooTight { cap: u32 },
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
    #[error("split-error magnitude {0} is outside [0, 1)")]
    EpsilonOutOfRange(String),
    #[error("malformed error vector `{0}`: use `+`, `-` or `0` per step")]
    MalformedVector(String),
    #[error("error vector has {actual} entries but the plan needs {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("gray position is defined for sign-only vectors; step {0} is a skip")]
    SkipInSignVector(usize),
    #[error("position set is empty")]
    EmptyPositions,
    #[error("step {step} is outside 1..={max}")]
    PositionOutOfRange { step: usize, max: usize },
    #[error("plan file is inconsistent: {0}")]
    InvalidPlan(String),
}
