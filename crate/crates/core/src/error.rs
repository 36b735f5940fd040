use thiserror::Error;

/// Errors raised by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point has {got} coordinates, polynomial has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coefficient {0} does not fit in a double")]
    CoefficientOverflow(String),

    #[error("cannot parse polynomial: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has no edges")]
    Edgeless,

    #[error("invalid matrix space: {0}")]
    InvalidSpace(String),

    #[error("input is not in general position: {0}")]
    NotGeneric(String),

    #[error("determinant vanishes identically on {0}")]
    DegenerateSpace(String),

    #[error("ground set of {0} elements exceeds the limit of 20")]
    GroundSetTooLarge(usize),

    #[error("system is not square: {equations} equations in {vars} variables")]
    NotSquare { equations: usize, vars: usize },

    #[error("system contains a zero equation")]
    ZeroEquation,

    #[error("Bezout number {count} exceeds the guard {limit}")]
    BezoutGuard { count: u128, limit: u128 },

    #[error("{failed} of {tracked} paths failed to track")]
    TrackingFailure { failed: usize, tracked: usize },

    #[error("{0} endpoint(s) are finite but not regular")]
    SuspectSolutions(usize),

    #[error("solution counts disagree across seeds: {counts:?} (seeds {seeds:?})")]
    SeedDisagreement { counts: Vec<usize>, seeds: Vec<u64> },

    #[error("Jacobian is numerically singular (condition estimate {0:.3e})")]
    SingularJacobian(f64),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("formula evaluation failed: {0}")]
    Formula(String),

    #[error("no real positive-definite critical point found")]
    NoPositiveDefinite,

    #[error("invalid sample data: {0}")]
    InvalidData(String),

    #[error("path budget of {budget} exceeded ({paths} paths needed)")]
    PathBudget { paths: u128, budget: u128 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
