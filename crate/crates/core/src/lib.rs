//! Node dissimilarity analysis for undirected networks.
//!
//! The crate computes four centrality metrics per node, reduces them with
//! principal component analysis, and measures how far apart nodes sit in the
//! reduced space, both as a single network-level index and as a per-node
//! score. A unit-disk-graph similarity index and a cross-network correlation
//! study are provided for comparison.

pub mod analysis;
pub mod centrality;
pub mod error;
pub mod graph;
pub mod ndi;
pub mod nsi;
pub mod numerics;
pub mod report;

pub use analysis::{
    batch_evaluate, correlation_study, spectral_radius_ratio, BatchEntry, BatchOptions,
    CorrelationStudy, ManifestEntry, NetworkSummary,
};
pub use centrality::{centrality_table, MetricTable};
pub use error::{NdiError, Result};
pub use graph::{ComponentLabeling, Graph};
pub use ndi::{
    compute_ndi, compute_ndi_from_table, AveragingConvention, NdiOptions, NdiReport,
    NodeDissimilarityMatrix,
};
pub use nsi::{compute_nsi, NsiResult, ThresholdMethod};
pub use numerics::VarianceDivisor;
