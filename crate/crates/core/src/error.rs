use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state dimension {0} is not of the form dim_A x 2")]
    OddDimension(usize),

    #[error("axis ({0}, {1}, {2}) is not a unit vector")]
    NonUnitAxis(f64, f64, f64),

    #[error("{what} index {index} out of range (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("basis incomplete for state (residual norm {0:.3e})")]
    BasisIncomplete(f64),

    #[error("measurement basis is not orthonormal (max |<phi_i|phi_j> - delta_ij| = {0:.3e})")]
    NotOrthonormal(f64),

    #[error("eigenvalue labels are not pairwise distinct: {0:?}")]
    DuplicateLabel(String),

    #[error("look-up table is malformed: {0}")]
    MalformedTable(String),

    #[error("infeasible geometry: {0}")]
    InfeasibleGeometry(String),

    #[error("no retrodiction protocol for this table/geometry: {0}")]
    Infeasible(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("constraint residual {residual:.3e} exceeds tolerance {tolerance:.1e} ({constraint})")]
    ConstraintResidual {
        constraint: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("internal construction error: {0}")]
    Construction(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
