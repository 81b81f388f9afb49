use thiserror::Error;

pub type Result<T> = std::result::Result<T, NdiError>;

#[derive(Debug, Error)]
pub enum NdiError {
    #[error("line {line}: expected two node labels, found one")]
    Parse { line: usize },

    #[error("edge list contains no edges")]
    EmptyGraph,

    #[error("node index {index} out of range for graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("graph has {components} components; rerun with largest-component mode")]
    Disconnected { components: usize },

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    PowerIterationCap { iterations: usize, residual: f64 },

    #[error(
        "jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:e})"
    )]
    JacobiNoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("need at least {required} rows, got {actual}")]
    TooFewRows { required: usize, actual: usize },

    #[error("every metric column has zero variance; use the degenerate-network path")]
    AllColumnsDegenerate,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("predictor is constant; linear fit undefined")]
    ConstantPredictor,

    #[error("non-finite value in column {column}, row {row}")]
    NonFinite { row: usize, column: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl NdiError {
    /// Numerical failures map to a distinct CLI exit code from input errors.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            NdiError::PowerIterationCap { .. } | NdiError::JacobiNoConvergence { .. }
        )
    }
}
