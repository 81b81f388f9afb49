use crate::error::{NdiError, Result};

use super::matrix::SymmetricMatrix;

/// Off-diagonal magnitude, relative to `max(1, ‖A‖_F)`, at which Jacobi stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Identity shift applied during power iteration; breaks `±λ` ties.
pub const POWER_SHIFT: f64 = 1.0;
pub const POWER_RAYLEIGH_TOLERANCE: f64 = 1e-12;
/// Residual `‖Av − λv‖∞`, relative to `max(1, ‖A‖∞)`, required to stop.
pub const POWER_RESIDUAL_TOLERANCE: f64 = 1e-12;
pub const POWER_MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit L2 norm.
    pub vector: Vec<f64>,
}

/// A symmetric linear map that power iteration can be run against without
/// materializing a dense matrix.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;

    /// `out = A x`.
    fn apply(&self, x: &[f64], out: &mut [f64]);

    /// Maximum absolute row sum.
    fn inf_norm(&self) -> f64;
}

impl SymmetricOperator for SymmetricMatrix {
    fn dim(&self) -> usize {
        SymmetricMatrix::dim(self)
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self.matvec(x, out)
    }

    fn inf_norm(&self) -> f64 {
        SymmetricMatrix::inf_norm(self)
    }
}

/// All eigenpairs of a symmetric matrix by cyclic Jacobi rotations, sorted by
/// descending eigenvalue.
///
/// Eigenvectors are oriented so their component sum is nonnegative (falling
/// back to the largest-magnitude component when the sum is zero).
pub fn jacobi_eigen(a: &SymmetricMatrix) -> Result<Vec<EigenPair>> {
    let n = a.dim();
    if !a.is_finite() {
        return Err(NdiError::Invalid("matrix has non-finite entries".into()));
    }
    // Working copies; `m` is driven to diagonal form, `v` accumulates rotations.
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let frobenius = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let tol = JACOBI_TOLERANCE * frobenius.max(1.0);
    let max_off = |m: &[Vec<f64>]| {
        let mut worst = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                worst = worst.max(m[p][q].abs());
            }
        }
        worst
    };

    let mut sweeps = 0;
    loop {
        let off = max_off(&m);
        if off < tol {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(NdiError::JacobiNoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[k][p];
                    let akq = m[k][q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    m[k][p] = new_kp;
                    m[p][k] = new_kp;
                    m[k][q] = new_kq;
                    m[q][k] = new_kq;
                }
                m[p][p] -= t * apq;
                m[q][q] += t * apq;
                m[p][q] = 0.0;
                m[q][p] = 0.0;

                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|j| {
            let mut vector: Vec<f64> = (0..n).map(|i| v[i][j]).collect();
            normalize(&mut vector);
            orient(&mut vector);
            EigenPair {
                value: m[j][j],
                vector,
            }
        })
        .collect();
    pairs.sort_by(|a, b| b.value.total_cmp(&a.value));
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    pub pair: EigenPair,
    pub iterations: usize,
    /// Set when the operator is identically zero; the pair is then
    /// `(0, 1/√n · 1)`.
    pub degenerate: bool,
}

/// Principal eigenpair of a symmetric nonnegative operator.
///
/// Iterates on `A + cI` with `c = POWER_SHIFT` from the uniform start vector
/// and returns `(λ − c, v)` with `v` oriented nonnegative. Stops once
/// successive Rayleigh quotients agree and the residual is small.
pub fn power_iteration_top<A: SymmetricOperator + ?Sized>(a: &A) -> Result<PowerIteration> {
    let n = a.dim();
    if n == 0 {
        return Err(NdiError::Invalid("empty operator".into()));
    }
    let uniform = vec![1.0 / (n as f64).sqrt(); n];
    let norm = a.inf_norm();
    if norm == 0.0 {
        return Ok(PowerIteration {
            pair: EigenPair {
                value: 0.0,
                vector: uniform,
            },
            iterations: 0,
            degenerate: true,
        });
    }
    let residual_tol = POWER_RESIDUAL_TOLERANCE * norm.max(1.0);

    let mut v = uniform;
    let mut av = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut residual = f64::INFINITY;
    for iteration in 1..=POWER_MAX_ITERATIONS {
        a.apply(&v, &mut av);
        let lambda: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        residual = v
            .iter()
            .zip(&av)
            .map(|(x, y)| (y - lambda * x).abs())
            .fold(0.0, f64::max);
        if residual <= residual_tol
            && (lambda - prev).abs() <= POWER_RAYLEIGH_TOLERANCE * lambda.abs().max(1.0)
        {
            orient(&mut v);
            return Ok(PowerIteration {
                pair: EigenPair {
                    value: lambda,
                    vector: v,
                },
                iterations: iteration,
                degenerate: false,
            });
        }
        prev = lambda;
        for (x, y) in v.iter_mut().zip(&av) {
            *x = y + POWER_SHIFT * *x;
        }
        normalize(&mut v);
    }
    Err(NdiError::PowerIterationCap {
        iterations: POWER_MAX_ITERATIONS,
        residual,
    })
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn orient(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    let flip = if sum.abs() > 1e-12 {
        sum < 0.0
    } else {
        let pivot = v.iter().copied().fold(
            0.0f64,
            |best, x| if x.abs() > best.abs() { x } else { best },
        );
        pivot < 0.0
    };
    if flip {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
