use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("log2 argument {arg} is not strictly positive")]
    LogDomain { arg: f64 },

    #[error("ratio denominator {value} is not strictly positive")]
    NonPositiveDenominator { value: f64 },

    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension { what: &'static str, expected: usize, got: usize },

    #[error("problem validation failed:\n{0}")]
    Validation(String),

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("domain is unbounded in global dimension {dim}")]
    UnboundedDomain { dim: usize },

    #[error("domain has no feasible point")]
    EmptyDomain,

    #[error("cannot bisect a zero-volume box")]
    ZeroVolumeBox,

    #[error("bounding subproblem failed numerically at node {node} after retry")]
    BoundingFailed { node: u64 },

    #[error("subproblem solver failed: {0}")]
    Subsolver(String),

    #[error("objective/identification combination is not supported: {0}")]
    IncompatibleCombination(String),

    #[error("objective must be increasing in the rate variables: {0}")]
    NonMonotoneObjective(String),

    #[error("cannot derive a safe initial incumbent threshold: {0}")]
    Gamma0(String),

    #[error("Dinkelbach iteration did not converge within {0} outer iterations")]
    MaxOuterIterations(usize),

    #[error("invalid benchmark configuration: {0}")]
    BenchConfig(String),

    #[error("CSV schema error: {0}")]
    Schema(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}
