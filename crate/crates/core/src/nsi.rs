//! Unit-disk-graph node similarity index.
//!
//! Nodes are placed in the unit hypercube by min-max normalizing each metric.
//! The index is `1 − d / √k`, where `d` is the smallest distance threshold at
//! which the graph linking every pair of points no farther apart than `d` is
//! connected.

use serde::{Deserialize, Serialize};

use crate::centrality::{centrality_table, MetricTable};
use crate::error::{NdiError, Result};
use crate::graph::Graph;
use crate::numerics::{euclidean_distance, Matrix};

pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitDiskEmbedding {
    coords: Matrix,
    /// Columns that were constant and mapped to zero.
    pub degenerate_columns: Vec<usize>,
}

impl UnitDiskEmbedding {
    pub fn coords(&self) -> &Matrix {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.rows()
    }

    pub fn k(&self) -> usize {
        self.coords.cols()
    }

    /// Wraps coordinates that are already inside the unit hypercube.
    pub fn from_unit_coords(coords: Matrix) -> Result<Self> {
        for i in 0..coords.rows() {
            if coords.row(i).iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(NdiError::Invalid(format!(
                    "row {i} lies outside the unit hypercube"
                )));
            }
        }
        Ok(UnitDiskEmbedding {
            coords,
            degenerate_columns: Vec::new(),
        })
    }

    fn distances(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let x = euclidean_distance(self.coords.row(i), self.coords.row(j))
                    .expect("rows share the embedding dimension");
                d[i][j] = x;
                d[j][i] = x;
            }
        }
        d
    }
}

pub fn minmax_normalize(table: &MetricTable) -> Result<UnitDiskEmbedding> {
    let values = table.values();
    let (n, k) = (values.rows(), values.cols());
    if n < 2 {
        return Err(NdiError::TooFewRows {
            required: 2,
            actual: n,
        });
    }
    let mut coords = Matrix::zeros(n, k);
    let mut degenerate_columns = Vec::new();
    for j in 0..k {
        let col = values.column(j);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi <= lo {
            degenerate_columns.push(j);
            continue;
        }
        for (i, x) in col.iter().enumerate() {
            coords.set(i, j, ((x - lo) / (hi - lo)).clamp(0.0, 1.0));
        }
    }
    Ok(UnitDiskEmbedding {
        coords,
        degenerate_columns,
    })
}

fn connected_within(dist: &[Vec<f64>], threshold: f64) -> bool {
    let n = dist.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if !seen[v] && dist[u][v] <= threshold {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

/// Binary search on `[0, √k]` for the smallest connecting threshold. Halts
/// once the bracket is narrower than `epsilon` and returns its upper end.
pub fn min_connectivity_threshold_bsearch(e: &UnitDiskEmbedding, epsilon: f64) -> Result<f64> {
    if e.n() < 2 {
        return Err(NdiError::TooFewRows {
            required: 2,
            actual: e.n(),
        });
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(NdiError::Invalid(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let dist = e.distances();
    if connected_within(&dist, 0.0) {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, (e.k() as f64).sqrt());
    while hi - lo >= epsilon {
        let mid = 0.5 * (lo + hi);
        if connected_within(&dist, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Largest edge of the Euclidean minimum spanning tree (dense Prim).
pub fn mst_bottleneck(e: &UnitDiskEmbedding) -> Result<f64> {
    let n = e.n();
    if n < 2 {
        return Err(NdiError::TooFewRows {
            required: 2,
            actual: n,
        });
    }
    let dist = e.distances();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut bottleneck = 0.0f64;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("a vertex remains outside the tree");
        in_tree[u] = true;
        bottleneck = bottleneck.max(best[u]);
        for v in 0..n {
            if !in_tree[v] && dist[u][v] < best[v] {
                best[v] = dist[u][v];
            }
        }
    }
    Ok(bottleneck)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    BinarySearch,
    #[default]
    MstBottleneck,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NsiResult {
    pub min_threshold: f64,
    pub nsi: f64,
    pub method: ThresholdMethod,
}

pub fn compute_nsi_from_embedding(
    e: &UnitDiskEmbedding,
    method: ThresholdMethod,
    epsilon: f64,
) -> Result<NsiResult> {
    let min_threshold = match method {
        ThresholdMethod::BinarySearch => min_connectivity_threshold_bsearch(e, epsilon)?,
        ThresholdMethod::MstBottleneck => mst_bottleneck(e)?,
    };
    let nsi = (1.0 - min_threshold / (e.k() as f64).sqrt()).clamp(0.0, 1.0);
    Ok(NsiResult {
        min_threshold,
        nsi,
        method,
    })
}

pub fn compute_nsi_from_table(
    table: &MetricTable,
    method: ThresholdMethod,
    epsilon: f64,
) -> Result<NsiResult> {
    compute_nsi_from_embedding(&minmax_normalize(table)?, method, epsilon)
}

/// NSI over the default centrality table. Requires a connected graph.
pub fn compute_nsi(g: &Graph, method: ThresholdMethod, epsilon: f64) -> Result<NsiResult> {
    compute_nsi_from_table(&centrality_table(g)?, method, epsilon)
}
