//! Cross-network study: spectral radius ratio, batch evaluation over a
//! manifest of edge lists, and linear fits between network-level measures.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{centrality_table, Adjacency};
use crate::error::{NdiError, Result};
use crate::graph::Graph;
use crate::ndi::{compute_ndi_from_table, NdiOptions};
use crate::nsi::{compute_nsi_from_table, ThresholdMethod, DEFAULT_EPSILON};
use crate::numerics::{linear_fit, power_iteration_top, LinearFit};
use crate::report::format_number;

/// Adjacency spectral radius divided by the mean degree.
pub fn spectral_radius_ratio(g: &Graph) -> Result<f64> {
    g.require_connected()?;
    let top = power_iteration_top(&Adjacency(g))?;
    Ok(top.pair.value / g.mean_degree())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSummary {
    pub name: String,
    #[serde(rename = "nodes")]
    pub n: usize,
    pub edges: usize,
    pub lambda_sp: f64,
    pub ndi: f64,
    pub nsi: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
}

/// Reads a `name,path` CSV. Relative paths resolve against `base_dir`.
pub fn read_manifest<R: Read>(reader: R, base_dir: &Path) -> Result<Vec<ManifestEntry>> {
    #[derive(Deserialize)]
    struct Row {
        name: String,
        path: PathBuf,
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    rdr.deserialize::<Row>()
        .map(|row| {
            let row = row?;
            let path = if row.path.is_relative() {
                base_dir.join(row.path)
            } else {
                row.path
            };
            Ok(ManifestEntry {
                name: row.name,
                path,
            })
        })
        .collect()
}

pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let file = fs::File::open(path)?;
    read_manifest(file, path.parent().unwrap_or(Path::new(".")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchOptions {
    pub ndi: NdiOptions,
    pub nsi_method: ThresholdMethod,
    pub epsilon: f64,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions {
            ndi: NdiOptions::default(),
            nsi_method: ThresholdMethod::MstBottleneck,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BatchEntry {
    Evaluated(NetworkSummary),
    Failed {
        name: String,
        path: PathBuf,
        error: String,
    },
}

impl BatchEntry {
    pub fn summary(&self) -> Option<&NetworkSummary> {
        match self {
            BatchEntry::Evaluated(s) => Some(s),
            BatchEntry::Failed { .. } => None,
        }
    }
}

/// All three network-level measures for one graph.
pub fn summarize(name: &str, g: &Graph, options: &BatchOptions) -> Result<NetworkSummary> {
    let lcc;
    let g = if options.ndi.largest_component {
        lcc = g.largest_component();
        &lcc
    } else {
        g.require_connected()?;
        g
    };
    let table = centrality_table(g)?;
    let ndi = compute_ndi_from_table(&table, &options.ndi)?;
    let nsi = compute_nsi_from_table(&table, options.nsi_method, options.epsilon)?;
    Ok(NetworkSummary {
        name: name.to_string(),
        n: g.n(),
        edges: g.m_edges(),
        lambda_sp: spectral_radius_ratio(g)?,
        ndi: ndi.network_ndi,
        nsi: nsi.nsi,
    })
}

/// Evaluates every manifest entry, in parallel, keeping manifest order.
/// A failing entry is recorded and does not stop the batch.
pub fn batch_evaluate(manifest: &[ManifestEntry], options: &BatchOptions) -> Vec<BatchEntry> {
    manifest
        .par_iter()
        .map(|entry| {
            let outcome = fs::read_to_string(&entry.path)
                .map_err(NdiError::from)
                .and_then(|text| Graph::parse_edge_list(&text))
                .and_then(|g| summarize(&entry.name, &g, options));
            match outcome {
                Ok(summary) => BatchEntry::Evaluated(summary),
                Err(e) => BatchEntry::Failed {
                    name: entry.name.clone(),
                    path: entry.path.clone(),
                    error: e.to_string(),
                },
            }
        })
        .collect()
}

/// Header `name,nodes,edges,lambda_sp,ndi,nsi`.
pub fn write_summaries<W: Write>(
    writer: W,
    summaries: &[NetworkSummary],
    precision: Option<usize>,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["name", "nodes", "edges", "lambda_sp", "ndi", "nsi"])?;
    for s in summaries {
        wtr.write_record([
            s.name.clone(),
            s.n.to_string(),
            s.edges.to_string(),
            format_number(s.lambda_sp, precision),
            format_number(s.ndi, precision),
            format_number(s.nsi, precision),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_summaries<R: Read>(reader: R) -> Result<Vec<NetworkSummary>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    rdr.deserialize()
        .map(|row| row.map_err(NdiError::from))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedFit {
    pub x: String,
    pub y: String,
    pub fit: LinearFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmittedFit {
    pub x: String,
    pub y: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationStudy {
    pub fits: Vec<NamedFit>,
    pub omitted: Vec<OmittedFit>,
}

impl CorrelationStudy {
    pub fn fit(&self, x: &str, y: &str) -> Option<&LinearFit> {
        self.fits
            .iter()
            .find(|f| f.x == x && f.y == y)
            .map(|f| &f.fit)
    }
}

/// Fits `ndi` against `lambda_sp` and against `nsi`.
pub fn correlation_study(summaries: &[NetworkSummary]) -> Result<CorrelationStudy> {
    if summaries.len() < 3 {
        return Err(NdiError::TooFewRows {
            required: 3,
            actual: summaries.len(),
        });
    }
    let ndi: Vec<f64> = summaries.iter().map(|s| s.ndi).collect();
    let predictors: [(&str, Vec<f64>); 2] = [
        ("lambda_sp", summaries.iter().map(|s| s.lambda_sp).collect()),
        ("nsi", summaries.iter().map(|s| s.nsi).collect()),
    ];
    let mut study = CorrelationStudy {
        fits: Vec::new(),
        omitted: Vec::new(),
    };
    for (name, x) in predictors {
        match linear_fit(&x, &ndi) {
            Ok(fit) => study.fits.push(NamedFit {
                x: name.into(),
                y: "ndi".into(),
                fit,
            }),
            Err(NdiError::ConstantPredictor) => study.omitted.push(OmittedFit {
                x: name.into(),
                y: "ndi".into(),
                reason: "constant predictor".into(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(study)
}
