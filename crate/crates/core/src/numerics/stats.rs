use serde::{Deserialize, Serialize};

use crate::error::{NdiError, Result};

use super::matrix::{Matrix, SymmetricMatrix};

/// A column whose standard deviation is at most this fraction of its largest
/// magnitude is treated as constant.
pub const DEGENERATE_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Divisor used for variances, standard deviations and covariances.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceDivisor {
    /// `n − 1`.
    #[default]
    Sample,
    /// `n`.
    Population,
}

impl VarianceDivisor {
    pub fn value(self, n: usize) -> f64 {
        match self {
            VarianceDivisor::Sample => (n - 1) as f64,
            VarianceDivisor::Population => n as f64,
        }
    }

    pub fn variance(self, xs: &[f64]) -> f64 {
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / self.value(n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub data: Matrix,
    pub means: Vec<f64>,
    pub std_devs: Vec<f64>,
    /// Zero-variance columns; their standardized values are all zero.
    pub degenerate_columns: Vec<usize>,
}

/// Column-wise z-scores `(x − mean) / s`.
pub fn standardize_columns(values: &Matrix, divisor: VarianceDivisor) -> Result<Standardized> {
    let (n, k) = (values.rows(), values.cols());
    if n < 3 {
        return Err(NdiError::TooFewRows {
            required: 3,
            actual: n,
        });
    }
    let mut data = Matrix::zeros(n, k);
    let mut means = Vec::with_capacity(k);
    let mut std_devs = Vec::with_capacity(k);
    let mut degenerate_columns = Vec::new();
    for j in 0..k {
        let col = values.column(j);
        if let Some(row) = col.iter().position(|x| !x.is_finite()) {
            return Err(NdiError::NonFinite { row, column: j });
        }
        let mean = col.iter().sum::<f64>() / n as f64;
        let sd = divisor.variance(&col).sqrt();
        let scale = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        means.push(mean);
        std_devs.push(sd);
        if sd <= DEGENERATE_RELATIVE_TOLERANCE * scale || sd == 0.0 {
            degenerate_columns.push(j);
            continue;
        }
        for (i, x) in col.iter().enumerate() {
            data.set(i, j, (x - mean) / sd);
        }
    }
    Ok(Standardized {
        data,
        means,
        std_devs,
        degenerate_columns,
    })
}

/// `XᵀX / d` for standardized `X`; with the divisor used to standardize this
/// is the Pearson correlation matrix (zero rows/columns for degenerate data).
pub fn correlation_matrix(std_data: &Matrix, divisor: VarianceDivisor) -> SymmetricMatrix {
    let (n, k) = (std_data.rows(), std_data.cols());
    let d = divisor.value(n);
    SymmetricMatrix::from_upper_fn(k, |p, q| {
        (0..n)
            .map(|i| std_data.get(i, p) * std_data.get(i, q))
            .sum::<f64>()
            / d
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(NdiError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(NdiError::TooFewRows {
            required: 2,
            actual: n,
        });
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(NdiError::ConstantPredictor);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - (slope * a + intercept)).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

pub fn euclidean_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() || p.is_empty() {
        return Err(NdiError::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(p.iter()
        .zip(q)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt())
}
