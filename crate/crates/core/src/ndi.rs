//! The node dissimilarity index pipeline.
//!
//! Raw node metrics are standardized and projected onto the eigenvectors of
//! their correlation matrix. Components whose score variance reaches the
//! retention threshold span a coordinate system; pairwise distances in it form
//! the node dissimilarity matrix (NDM). The network-level index is the NDM's
//! principal eigenvalue over its average entry measure, and the node-level
//! index is the principal eigenvector. An elbow cut on the sorted node-level
//! values separates dissimilar nodes from the rest.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::centrality::{centrality_table, MetricTable};
use crate::error::{NdiError, Result};
use crate::graph::Graph;
use crate::numerics::{
    correlation_matrix, euclidean_distance, jacobi_eigen, power_iteration_top, standardize_columns,
    Matrix, Standardized, SymmetricMatrix, VarianceDivisor,
};

pub const DEFAULT_RETENTION_THRESHOLD: f64 = 1.0;

/// Score variances this close below the threshold still count as reaching it,
/// so components with variance exactly 1 survive rounding.
pub const RETENTION_SLACK: f64 = 1e-9;

/// Node-level values within this range of each other are treated as flat.
pub const ELBOW_FLAT_TOLERANCE: f64 = 1e-12;

/// How the "average" in the network-level ratio is taken over an `n × n` NDM.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AveragingConvention {
    /// Sum of all entries divided by `n` (mean row sum).
    #[default]
    RowMean,
    /// Sum of off-diagonal entries divided by `n − 1`.
    NondiagOverNMinus1,
    /// Sum of off-diagonal entries divided by `n (n − 1)`.
    EntryMean,
}

impl AveragingConvention {
    pub const ALL: [AveragingConvention; 3] = [
        AveragingConvention::RowMean,
        AveragingConvention::NondiagOverNMinus1,
        AveragingConvention::EntryMean,
    ];

    pub fn average(self, ndm: &NodeDissimilarityMatrix) -> f64 {
        let n = ndm.dim() as f64;
        // the diagonal is zero, so the full sum is the off-diagonal sum
        let total = ndm.as_symmetric().sum();
        match self {
            AveragingConvention::RowMean => total / n,
            AveragingConvention::NondiagOverNMinus1 => total / (n - 1.0),
            AveragingConvention::EntryMean => total / (n * (n - 1.0)),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AveragingConvention::RowMean => "row_mean",
            AveragingConvention::NondiagOverNMinus1 => "nondiag_over_n_minus_1",
            AveragingConvention::EntryMean => "entry_mean",
        }
    }
}

impl fmt::Display for AveragingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdiOptions {
    pub retention_threshold: f64,
    pub convention: AveragingConvention,
    pub divisor: VarianceDivisor,
    /// Analyze the largest connected component instead of rejecting
    /// disconnected input.
    pub largest_component: bool,
}

impl Default for NdiOptions {
    fn default() -> Self {
        NdiOptions {
            retention_threshold: DEFAULT_RETENTION_THRESHOLD,
            convention: AveragingConvention::RowMean,
            divisor: VarianceDivisor::Sample,
            largest_component: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    pub standardized: Standardized,
    pub correlation: SymmetricMatrix,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[c]` pairs with `eigenvalues[c]`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `n × k`; column `c` is the projection on `eigenvectors[c]`.
    pub scores: Matrix,
    pub pc_variances: Vec<f64>,
    pub retained_m: usize,
}

pub fn run_pca(
    table: &MetricTable,
    retention_threshold: f64,
    divisor: VarianceDivisor,
) -> Result<PcaResult> {
    let standardized = standardize_columns(table.values(), divisor)?;
    if standardized.degenerate_columns.len() == table.k() {
        return Err(NdiError::AllColumnsDegenerate);
    }
    let correlation = correlation_matrix(&standardized.data, divisor);
    let pairs = jacobi_eigen(&correlation)?;
    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.value).collect();
    let eigenvectors: Vec<Vec<f64>> = pairs.into_iter().map(|p| p.vector).collect();
    let scores = standardized
        .data
        .matmul(&Matrix::from_columns(&eigenvectors)?)?;
    let pc_variances: Vec<f64> = (0..scores.cols())
        .map(|c| divisor.variance(&scores.column(c)))
        .collect();
    let retained = pc_variances
        .iter()
        .filter(|&&v| v >= retention_threshold - RETENTION_SLACK)
        .count();
    Ok(PcaResult {
        standardized,
        correlation,
        eigenvalues,
        eigenvectors,
        scores,
        pc_variances,
        retained_m: retained.max(1),
    })
}

/// Pairwise Euclidean distances between nodes in retained-component space.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeDissimilarityMatrix(SymmetricMatrix);

impl NodeDissimilarityMatrix {
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_symmetric(&self) -> &SymmetricMatrix {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.inf_norm() == 0.0
    }

    /// `n × n` CSV without header, rows in node index order.
    pub fn to_csv(&self, precision: Option<usize>) -> String {
        let mut out = String::new();
        for i in 0..self.dim() {
            let row: Vec<String> = self
                .0
                .row(i)
                .iter()
                .map(|&x| crate::report::format_number(x, precision))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Uses the first `retained_m` score columns as node coordinates.
pub fn build_ndm(scores: &Matrix, retained_m: usize) -> Result<NodeDissimilarityMatrix> {
    if retained_m == 0 || retained_m > scores.cols() {
        return Err(NdiError::Invalid(format!(
            "retained_m must lie in [1, {}], got {retained_m}",
            scores.cols()
        )));
    }
    let n = scores.rows();
    let coords: Vec<&[f64]> = (0..n).map(|i| &scores.row(i)[..retained_m]).collect();
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, euclidean_distance(coords[i], coords[j])?);
        }
    }
    Ok(NodeDissimilarityMatrix(m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkNdi {
    pub ndi: f64,
    pub eigenvalue: f64,
    pub average: f64,
    /// All-zero NDM; `ndi` is then defined as 1.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeNdi {
    pub values: Vec<f64>,
    /// All-zero NDM; `values` is then uniform.
    pub degenerate: bool,
}

fn principal(ndm: &NodeDissimilarityMatrix) -> Result<crate::numerics::PowerIteration> {
    if ndm.dim() < 2 {
        return Err(NdiError::TooFewRows {
            required: 2,
            actual: ndm.dim(),
        });
    }
    power_iteration_top(ndm.as_symmetric())
}

fn ratio(
    eigenvalue: f64,
    degenerate: bool,
    ndm: &NodeDissimilarityMatrix,
    convention: AveragingConvention,
) -> NetworkNdi {
    let average = convention.average(ndm);
    if degenerate || average <= 0.0 {
        return NetworkNdi {
            ndi: 1.0,
            eigenvalue,
            average,
            degenerate: true,
        };
    }
    NetworkNdi {
        ndi: eigenvalue / average,
        eigenvalue,
        average,
        degenerate: false,
    }
}

pub fn network_ndi(
    ndm: &NodeDissimilarityMatrix,
    convention: AveragingConvention,
) -> Result<NetworkNdi> {
    let top = principal(ndm)?;
    Ok(ratio(top.pair.value, top.degenerate, ndm, convention))
}

pub fn node_ndi(ndm: &NodeDissimilarityMatrix) -> Result<NodeNdi> {
    let top = principal(ndm)?;
    Ok(NodeNdi {
        values: top.pair.vector,
        degenerate: top.degenerate,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElbowPartition {
    /// Rank (in descending order) of the elbow point; ranks before it are
    /// dissimilar.
    pub elbow_index: usize,
    /// Node indices sorted by descending value, ties by index.
    pub order: Vec<usize>,
    pub dissimilar: Vec<usize>,
    pub similar: Vec<usize>,
    /// All values equal; nothing is dissimilar.
    pub flat: bool,
}

/// Elbow cut on descending node-level values.
///
/// The elbow is the interior point lying farthest below the chord joining the
/// first and last sorted points (smallest rank on ties). It belongs to the
/// similar group.
pub fn elbow_partition(values: &[f64]) -> Result<ElbowPartition> {
    let n = values.len();
    if n < 3 {
        return Err(NdiError::TooFewRows {
            required: 3,
            actual: n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();

    let (first, last) = (sorted[0], sorted[n - 1]);
    if first - last <= ELBOW_FLAT_TOLERANCE {
        return Ok(ElbowPartition {
            elbow_index: 0,
            similar: order.clone(),
            order,
            dissimilar: Vec::new(),
            flat: true,
        });
    }

    let slope = (last - first) / (n - 1) as f64;
    // perpendicular distance = vertical gap / sqrt(1 + slope²); the constant
    // factor does not move the argmax
    let scale = (1.0 + slope * slope).sqrt();
    let mut elbow_index = 1;
    let mut best = f64::NEG_INFINITY;
    for (rank, &y) in sorted.iter().enumerate().take(n - 1).skip(1) {
        let below = (first + slope * rank as f64 - y) / scale;
        if below > best {
            best = below;
            elbow_index = rank;
        }
    }
    Ok(ElbowPartition {
        elbow_index,
        dissimilar: order[..elbow_index].to_vec(),
        similar: order[elbow_index..].to_vec(),
        order,
        flat: false,
    })
}

/// Conditions under which the pipeline substituted a defined fallback.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum DegeneracyFlag {
    /// A metric column had zero variance and was zeroed.
    ConstantColumn(String),
    /// Every metric column was constant; the network is treated as perfectly
    /// similar.
    AllColumnsConstant,
    /// The NDM was identically zero.
    ZeroDissimilarity,
    /// Node-level values were all equal; no dissimilar nodes.
    FlatNodeNdi,
}

impl fmt::Display for DegeneracyFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegeneracyFlag::ConstantColumn(c) => write!(f, "constant_column:{c}"),
            DegeneracyFlag::AllColumnsConstant => f.write_str("all_columns_constant"),
            DegeneracyFlag::ZeroDissimilarity => f.write_str("zero_dissimilarity"),
            DegeneracyFlag::FlatNodeNdi => f.write_str("flat_node_ndi"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NdiReport {
    pub n: usize,
    /// Edge count when the report came from a graph.
    pub edges: Option<usize>,
    pub table: MetricTable,
    pub options: NdiOptions,
    pub network_ndi: f64,
    pub ndm_principal_eigenvalue: f64,
    pub ndm_average: f64,
    /// Correlation-matrix eigenvalues, descending; empty when PCA was skipped.
    pub eigenvalues: Vec<f64>,
    pub pc_variances: Vec<f64>,
    /// 0 when PCA was skipped.
    pub retained_m: usize,
    /// Retained-component coordinates per node.
    pub scores: Vec<Vec<f64>>,
    pub ndm: NodeDissimilarityMatrix,
    pub node_ndi: Vec<f64>,
    pub elbow: ElbowPartition,
    pub degeneracy_flags: Vec<DegeneracyFlag>,
}

impl NdiReport {
    /// True when any fallback replaced the regular computation of the index.
    pub fn is_degenerate(&self) -> bool {
        self.degeneracy_flags.iter().any(|f| {
            matches!(
                f,
                DegeneracyFlag::AllColumnsConstant | DegeneracyFlag::ZeroDissimilarity
            )
        })
    }

    pub fn labels(&self) -> &[String] {
        self.table.node_labels()
    }

    pub fn dissimilar_labels(&self) -> Vec<&str> {
        self.elbow
            .dissimilar
            .iter()
            .map(|&i| self.labels()[i].as_str())
            .collect()
    }

    pub fn similar_labels(&self) -> Vec<&str> {
        self.elbow
            .similar
            .iter()
            .map(|&i| self.labels()[i].as_str())
            .collect()
    }

    /// Rank of each node in descending node-level order.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.n];
        for (rank, &i) in self.elbow.order.iter().enumerate() {
            ranks[i] = rank;
        }
        ranks
    }

    pub fn is_dissimilar(&self, node: usize) -> bool {
        self.elbow.dissimilar.contains(&node)
    }
}

/// Full pipeline on the default centrality table of `g`.
pub fn compute_ndi(g: &Graph, options: &NdiOptions) -> Result<NdiReport> {
    let lcc;
    let g = if options.largest_component {
        lcc = g.largest_component();
        &lcc
    } else {
        g.require_connected()?;
        g
    };
    let table = centrality_table(g)?;
    let mut report = compute_ndi_from_table(&table, options)?;
    report.edges = Some(g.m_edges());
    Ok(report)
}

/// Pipeline on an arbitrary metric table.
pub fn compute_ndi_from_table(table: &MetricTable, options: &NdiOptions) -> Result<NdiReport> {
    let n = table.n();
    if n < 3 {
        return Err(NdiError::TooFewRows {
            required: 3,
            actual: n,
        });
    }
    if table.k() == 0 {
        return Err(NdiError::Invalid("metric table has no columns".into()));
    }

    let pca = match run_pca(table, options.retention_threshold, options.divisor) {
        Ok(pca) => pca,
        Err(NdiError::AllColumnsDegenerate) => return Ok(degenerate_report(table, options)),
        Err(e) => return Err(e),
    };

    let mut flags: Vec<DegeneracyFlag> = pca
        .standardized
        .degenerate_columns
        .iter()
        .map(|&j| DegeneracyFlag::ConstantColumn(table.column_names()[j].clone()))
        .collect();

    let ndm = build_ndm(&pca.scores, pca.retained_m)?;
    let top = principal(&ndm)?;
    let network = ratio(top.pair.value, top.degenerate, &ndm, options.convention);
    if network.degenerate {
        flags.push(DegeneracyFlag::ZeroDissimilarity);
    }
    let node_ndi = top.pair.vector;
    let elbow = elbow_partition(&node_ndi)?;
    if elbow.flat {
        flags.push(DegeneracyFlag::FlatNodeNdi);
    }

    let scores = (0..n)
        .map(|i| pca.scores.row(i)[..pca.retained_m].to_vec())
        .collect();
    Ok(NdiReport {
        n,
        edges: None,
        table: table.clone(),
        options: *options,
        network_ndi: network.ndi,
        ndm_principal_eigenvalue: network.eigenvalue,
        ndm_average: network.average,
        eigenvalues: pca.eigenvalues,
        pc_variances: pca.pc_variances,
        retained_m: pca.retained_m,
        scores,
        ndm,
        node_ndi,
        elbow,
        degeneracy_flags: flags,
    })
}

fn degenerate_report(table: &MetricTable, options: &NdiOptions) -> NdiReport {
    let n = table.n();
    let mut flags: Vec<DegeneracyFlag> = table
        .column_names()
        .iter()
        .map(|c| DegeneracyFlag::ConstantColumn(c.clone()))
        .collect();
    flags.push(DegeneracyFlag::AllColumnsConstant);
    flags.push(DegeneracyFlag::FlatNodeNdi);
    let order: Vec<usize> = (0..n).collect();
    NdiReport {
        n,
        edges: None,
        table: table.clone(),
        options: *options,
        network_ndi: 1.0,
        ndm_principal_eigenvalue: 0.0,
        ndm_average: 0.0,
        eigenvalues: Vec::new(),
        pc_variances: Vec::new(),
        retained_m: 0,
        scores: vec![Vec::new(); n],
        ndm: NodeDissimilarityMatrix(SymmetricMatrix::zeros(n)),
        node_ndi: vec![1.0 / (n as f64).sqrt(); n],
        elbow: ElbowPartition {
            elbow_index: 0,
            similar: order.clone(),
            order,
            dissimilar: Vec::new(),
            flat: true,
        },
        degeneracy_flags: flags,
    }
}
