//! Dense linear algebra and statistics used by the metric pipelines.

mod eigen;
mod matrix;
mod stats;

pub use eigen::{
    jacobi_eigen, power_iteration_top, EigenPair, PowerIteration, SymmetricOperator,
    JACOBI_MAX_SWEEPS, JACOBI_TOLERANCE, POWER_MAX_ITERATIONS, POWER_RAYLEIGH_TOLERANCE,
    POWER_RESIDUAL_TOLERANCE, POWER_SHIFT,
};
pub use matrix::{Matrix, SymmetricMatrix};
pub use stats::{
    correlation_matrix, euclidean_distance, linear_fit, standardize_columns, LinearFit,
    Standardized, VarianceDivisor, DEGENERATE_RELATIVE_TOLERANCE,
};
