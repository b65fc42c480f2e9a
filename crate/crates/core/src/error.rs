use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transfer function has a zero numerator")]
    ZeroNumerator,

    #[error("denominator polynomial is zero")]
    ZeroDenominator,

    #[error("denominator vanishes at probe point s = {re} + {im}j")]
    PoleAtProbe { re: f64, im: f64 },

    #[error("DC gain diverges (pole at the origin)")]
    InfiniteDcGain,

    #[error("transfer function is improper (numerator degree {num} > denominator degree {den})")]
    ImproperTf { num: usize, den: usize },

    #[error("transfer function is not strictly proper")]
    NotStrictlyProper,

    #[error("pole with real part {real_part:e} outside the allowed region")]
    UnstablePoles { real_part: f64 },

    #[error("recursion step {step} produced a zero denominator")]
    DegenerateDenominator { step: usize },

    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("sample rate mismatch: filter at {filter} Hz, history at {history} Hz")]
    SampleRateMismatch { filter: f64, history: f64 },

    #[error("time {t} is not after the previous step at {last}")]
    NonMonotonicTime { t: f64, last: f64 },

    #[error("vehicle index {index} outside 0..={last}")]
    IndexOutOfRange { index: usize, last: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("state diverged at t = {t} s (vehicle {vehicle})")]
    NonFiniteState { t: f64, vehicle: usize },

    #[error("trace has no samples")]
    EmptyTrace,

    #[error("origin limit did not settle: {at_coarse} vs {at_fine}")]
    ExtrapolationMismatch { at_coarse: f64, at_fine: f64 },

    #[error("squared filter truncation drops {ratio:.3e} of its mass")]
    TruncationTail { ratio: f64 },

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
