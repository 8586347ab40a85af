use thiserror::Error;

/// Errors raised by the analysis routines.
///
/// Mathematical failures of a condition are never errors; they are reported
/// as [`crate::Verdict`]s. Errors cover bad input, numerical breakdown and
/// internal consistency checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value while evaluating {0}")]
    NonFinite(String),

    #[error("weight is not declared nondecreasing")]
    NotMonotone,

    #[error("condition {0} requires a nondecreasing weight")]
    NonMonotoneInput(String),

    #[error("horizon too small: {0}")]
    HorizonTooSmall(String),

    #[error("implication chain violated: {premise} holds but {conclusion} fails")]
    ChainViolation { premise: String, conclusion: String },

    #[error("bridge violated: {0}")]
    BridgeViolation(String),

    #[error("conjugate is infinite at x = {0} (slopes of phi stay bounded)")]
    Om3Violated(f64),

    #[error("y-horizon too small: supremum for x = {0} sits at the upper boundary")]
    YHorizonTooSmall(f64),

    #[error("weight is not matrix admissible: {0}")]
    NotMatrixAdmissible(String),

    #[error("empty input")]
    EmptyInput,

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    #[error("matrix order violated between indices {lo} and {hi} at u = {u}")]
    MatrixOrderViolated { lo: f64, hi: f64, u: f64 },

    #[error("index {0} is not part of the explicit matrix")]
    UnknownIndex(f64),

    #[error("matrix relation disagrees with its reduction: {0}")]
    RelationDisagreement(String),

    #[error("witness construction failed at block n = {0}")]
    WitnessConstructionFailed(usize),

    #[error("no boundedness violation found: the matrix looks bounded")]
    NoViolationFound,

    #[error("grid too narrow: {0}")]
    GridTooNarrow(String),

    #[error("validation failed: {0}")]
    ValidationFailed(String),

    #[error("corner overflow at block {j}; largest safe J is {safe}")]
    OverflowAtJ { j: usize, safe: usize },

    #[error("no witness below J for A = {a}; roughly J >= {required} needed")]
    JHorizonTooSmall { a: f64, required: usize },

    #[error("gamma = {gamma} exceeds the block gaps below j = {j0}")]
    GammaTooLarge { gamma: f64, j0: usize },

    #[error("profiles were built from different corner sequences")]
    MismatchedCorners,

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
