use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular matrix: pivot {pivot:e} at column {column} is below {threshold:e}")]
    SingularMatrix {
        column: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("linear solve residual {residual:e} exceeds bound {bound:e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    #[error("divergence at step {step}: node {node} has value {value}")]
    Divergence { step: usize, node: usize, value: f64 },

    #[error("eigensolver failed to converge after {iterations} iterations")]
    EigenFailure { iterations: usize },

    #[error("grid too small: {nodes} nodes per direction, need at least {min}")]
    GridTooSmall { nodes: usize, min: usize },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("time {0} was not recorded as a snapshot")]
    TimeNotSampled(f64),

    #[error("point {0:?} lies outside the domain")]
    OutsideDomain(Vec<f64>),

    #[error("missing parameter: {0}")]
    MissingParameter(&'static str),
}

impl Error {
    /// Short machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::DegenerateGrid(_) => "degenerate-grid",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::SingularMatrix { .. } => "singular-matrix",
            Error::ResidualTooLarge { .. } => "residual-too-large",
            Error::Divergence { .. } => "divergence",
            Error::EigenFailure { .. } => "eigensolver-failure",
            Error::GridTooSmall { .. } => "grid-too-small",
            Error::Evaluation(_) => "evaluation-error",
            Error::TimeNotSampled(_) => "time-not-sampled",
            Error::OutsideDomain(_) => "outside-domain",
            Error::MissingParameter(_) => "missing-parameter",
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix { .. }
                | Error::ResidualTooLarge { .. }
                | Error::Divergence { .. }
                | Error::EigenFailure { .. }
                | Error::Evaluation(_)
        )
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
