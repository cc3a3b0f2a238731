//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Operation undefined at zero (factorization, valuation, log of 0).
    #[error("operation undefined for zero input")]
    ZeroInput,

    /// Input exceeded the factorization digit cap.
    #[error("factorization input has {digits} decimal digits, cap is {cap}")]
    FactorDigitCap { digits: usize, cap: usize },

    /// Factorization gave up within its iteration budget.
    #[error("factorization effort budget exhausted on a {digits}-digit cofactor")]
    FactorBudget { digits: usize },

    /// All homogeneous coordinates are zero.
    #[error("all coordinates are zero")]
    AllZeroCoordinates,

    /// A coordinate is zero where the torus structure requires it nonzero.
    #[error("zero coordinate where a nonzero one is required")]
    ZeroCoordinate,

    /// Mismatched projective/torus dimensions.
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    /// Coordinatewise product vanished identically.
    #[error("degenerate coordinatewise product (all products zero)")]
    DegenerateProduct,

    /// Every defining form of the map vanished at the point.
    #[error("map is indeterminate at the point{}", word_suffix(.word))]
    IndeterminateAt { word: Option<Vec<usize>> },

    /// Local height requested at a point lying on the divisor support.
    #[error("point lies on the divisor support")]
    OnDivisorSupport,

    /// Height-zero point where a positive height is required.
    #[error("height degenerate: point has height zero")]
    HeightDegenerate,

    /// Empty sample where at least one point is required.
    #[error("empty sample")]
    EmptySample,

    /// Dependence-solver enumeration budget exceeded with undetermined status.
    #[error("dependence enumeration budget exceeded; status undetermined")]
    EnumerationBudget,

    /// Iteration/stage budget exhausted before reaching the tolerance.
    #[error("budget exhausted: {0}")]
    Budget(String),

    /// Random generation retries exhausted.
    #[error("generation failed after {tries} attempts: {reason}")]
    GenerationFailed { tries: usize, reason: String },

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Invalid configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Precondition violation not covered above.
    #[error("domain error: {0}")]
    Domain(String),
}

fn word_suffix(word: &Option<Vec<usize>>) -> String {
    match word {
        Some(w) => format!(" (word prefix {:?})", w),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
