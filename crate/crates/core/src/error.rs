use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The run-length bound `k` is outside the domain of an operation.
    ///
    /// `k = 1` is rejected by the series machinery: the denominator formula
    /// degenerates to the constant 1, and Carlitz compositions (no two equal
    /// adjacent parts) are counted at `k = 2`.
    #[error("run bound k = {k} not supported here (need k >= {min})")]
    InvalidRunBound { k: u32, min: u32 },

    /// A series operation needs a unit constant term.
    #[error("series reciprocal requires constant term 1, got {got}")]
    NonUnitConstantTerm { got: String },

    /// Composition size must be at least 1.
    #[error("composition size n must be >= 1")]
    ZeroSize,

    /// A composition must consist of parts that are all >= 1.
    #[error("compositions must be nonempty with all parts >= 1")]
    InvalidComposition,

    /// Exhaustive enumeration refused: 2^(n-1) compositions is too many.
    #[error("n = {n} exceeds the enumeration cap {cap} (2^(n-1) compositions)")]
    EnumerationCapExceeded { n: u32, cap: u32 },

    /// Argument outside the mathematical domain of the operation.
    #[error("argument out of domain: {what}")]
    OutOfDomain { what: String },

    /// Requested tolerance cannot be certified at the working precision.
    #[error("tolerance {requested:e} infeasible at {digits} working digits")]
    ToleranceInfeasible { requested: f64, digits: u32 },

    /// Iteration failed to converge within the cap.
    #[error("no convergence within {iterations} iterations")]
    NonConvergence { iterations: usize },

    /// Not enough sample points for a certified circle scan.
    #[error("need at least {need} sample points, got {got}")]
    InsufficientSamples { got: u32, need: u32 },
}

impl Error {
    /// Stable machine-parsable code, used as an error prefix by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidRunBound { .. } => "invalid-run-bound",
            Error::NonUnitConstantTerm { .. } => "non-unit-constant-term",
            Error::ZeroSize => "zero-size",
            Error::InvalidComposition => "invalid-composition",
            Error::EnumerationCapExceeded { .. } => "enumeration-cap-exceeded",
            Error::OutOfDomain { .. } => "out-of-domain",
            Error::ToleranceInfeasible { .. } => "tolerance-infeasible",
            Error::NonConvergence { .. } => "non-convergence",
            Error::InsufficientSamples { .. } => "insufficient-samples",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
