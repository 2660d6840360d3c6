use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid radar parameters: {0}")]
    InvalidParams(&'static str),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("frequency code {code} at pulse {pulse} is outside 0..{n_freqs}")]
    CodeOutOfRange { pulse: usize, code: usize, n_freqs: usize },

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("scene requests {requested} targets but only {available} velocity cells exist")]
    TooManyTargets { requested: usize, available: usize },

    #[error("{per_target} scatterers per target exceed the {n_freqs} range cells")]
    TooManyScatterers { per_target: usize, n_freqs: usize },

    #[error("two scatterers occupy grid cell (p={range_index}, q={velocity_index})")]
    DuplicatePlacement { range_index: usize, velocity_index: usize },

    #[error("noise power must be finite and non-negative, got {0}")]
    NegativeNoisePower(f64),

    #[error("closed-form coherence requires the simplified Doppler model")]
    ClosedFormRequiresSimplified,

    #[error("numeric inter-block coherence is limited to N <= {limit}, got N = {n}")]
    TooLargeForNumeric { n: usize, limit: usize },

    #[error("invalid bound argument: {0}")]
    InvalidBoundArgument(&'static str),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("sparsity {sparsity} must lie in 1..={max}")]
    InvalidSparsity { sparsity: usize, max: usize },

    #[error("selected columns became rank deficient at iteration {iteration}")]
    RankDeficient { iteration: usize },

    #[error("solver diverged (non-finite objective) at iteration {iteration}")]
    Diverged { iteration: usize },

    #[error("hit rate is undefined for an empty true support")]
    EmptyTruth,
}
