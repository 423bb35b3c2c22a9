use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by constructions, measurements, and file formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity out of range: n={n} not in [1, {max}]")]
    ArityOutOfRange { n: u32, max: u32 },

    #[error("arity mismatch: expected n={expected}, got n={got}")]
    ArityMismatch { expected: u32, got: u32 },

    #[error("level out of range: k={k} with n={n}")]
    LevelOutOfRange { k: u32, n: u32 },

    #[error("epsilon out of range: {value} (expected {expected})")]
    EpsilonOutOfRange { value: f64, expected: &'static str },

    #[error("probability out of range: {0}")]
    ProbabilityOutOfRange(f64),

    #[error("function is not monotone")]
    NotMonotone,

    #[error("dimension out of range: d={d} with n={n}")]
    DimensionOutOfRange { d: u32, n: u32 },

    #[error(
        "degenerate d formula ({detail}); pick DMode::SimpleLogLog or an explicit d instead"
    )]
    DegenerateDFormula { detail: String },

    #[error("operation requires f(x) = 1 at the queried input")]
    NotAOneInput,

    #[error("block count out of range: b={b} with n={n}")]
    BlockCountOutOfRange { b: u32, n: u32 },

    #[error("empty coordinate set")]
    EmptyCoordinateSet,

    #[error("exhaustive evaluation cap exceeded: n={n} > cap={cap}")]
    ExhaustiveCapExceeded { n: u32, cap: u32 },

    #[error("exact minimum-DNF search supports n <= {max}, got n={n}")]
    MinDnfTooLarge { n: u32, max: u32 },

    #[error("too few samples: {got} < {min}")]
    TooFewSamples { got: u64, min: u64 },

    #[error("sampling retries exhausted at level offset l={l}: condition {condition} kept failing")]
    SampleRetriesExhausted { l: u32, condition: SampleCondition },

    #[error("invalid term: values {values:#x} outside mask {mask:#x}")]
    ValueOutsideMask { mask: u32, values: u32 },

    #[error("parse error in {what}: {detail}")]
    Parse { what: &'static str, detail: String },
}

/// Which resampling condition failed when retries ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleCondition {
    /// Sampled DNF exceeded the size budget.
    Size,
    /// Sampled DNF missed too many inputs of the checked layer.
    Coverage,
}

impl std::fmt::Display for SampleCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SampleCondition::Size => write!(f, "size"),
            SampleCondition::Coverage => write!(f, "coverage"),
        }
    }
}
