use thiserror::Error;

/// Errors raised by the geometry and moduli-space routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinkageError {
    #[error("side lengths must be positive and finite, got {0:?}")]
    InvalidLength(Vec<f64>),

    #[error("no planar realization: longest side {longest} exceeds the sum {rest} of the others")]
    NoRealization { longest: f64, rest: f64 },

    #[error("three of the four points coincide; the cross-ratio is undefined")]
    ThreePointsCoincide,

    #[error("adjacent vertices v{0} and v{1} coincide")]
    AdjacentVerticesCoincide(usize, usize),

    #[error("linkage is degenerate: the signed sum {0} vanishes")]
    Degenerate(String),

    #[error("linkage is non-degenerate; no degenerate image report applies")]
    NotDegenerate,

    #[error("angle pair violates the closing constraint (residual {0:e})")]
    ConstraintResidual(f64),

    #[error("arm is not generic: {0}")]
    NonGenericArm(String),

    #[error("end-to-end distance {t} outside the attainable interval [{lo}, {hi}]")]
    SliceOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("point ({phi}, {eta}) is not an aligned position")]
    NotAligned { phi: f64, eta: f64 },

    #[error("sample count {0} is below the minimum of {1}")]
    TooFewSamples(usize, usize),

    #[error("could not parse length list {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, LinkageError>;
