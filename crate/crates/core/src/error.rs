use thiserror::Error;

/// Errors raised by the calculator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("profile {fine:?} does not refine {coarse:?}")]
    NotRefinement { fine: Vec<usize>, coarse: Vec<usize> },

    #[error("vectors are linearly dependent")]
    DependentVectors,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    /// A coefficient that should have cancelled did not. This is the identity
    /// check behind every limit at zero.
    #[error("cancellation failure at t^{order}: residual {residual} exceeds tolerance {tolerance}")]
    Cancellation {
        order: i32,
        residual: String,
        tolerance: String,
    },

    #[error("jet truncated too early: {0}")]
    Truncation(String),

    #[error("routes disagree for {what}: spread {spread} exceeds tolerance {tolerance}")]
    RouteDisagreement {
        what: String,
        spread: String,
        tolerance: String,
    },

    #[error("pair does not induce the orbit {target:?}")]
    NotInducing { target: Vec<usize> },

    #[error("unsupported number field: {0}")]
    UnsupportedField(String),

    #[error("precision budget exhausted: {0}")]
    PrecisionBudget(String),

    #[error("no generic direction found after {0} draws")]
    NoGenericDirection(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
