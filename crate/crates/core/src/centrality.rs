//! Degree, eigenvector, betweenness and closeness centrality.

use std::collections::VecDeque;
use std::io::{Read, Write};

use crate::error::{NdiError, Result};
use crate::graph::Graph;
use crate::numerics::{power_iteration_top, Matrix, SymmetricOperator};
use crate::report::format_number;

/// Column names of the default metric table, in order.
pub const DEFAULT_COLUMNS: [&str; 4] = ["deg", "evc", "bwc", "clc"];

/// The 0-1 adjacency matrix of a graph as a sparse operator.
pub struct Adjacency<'a>(pub &'a Graph);

impl SymmetricOperator for Adjacency<'_> {
    fn dim(&self) -> usize {
        self.0.n()
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0.neighbors(i).iter().map(|&j| x[j]).sum();
        }
    }

    fn inf_norm(&self) -> f64 {
        (0..self.0.n()).map(|i| self.0.degree(i)).max().unwrap_or(0) as f64
    }
}

pub fn degree_centrality(g: &Graph) -> Vec<f64> {
    (0..g.n()).map(|i| g.degree(i) as f64).collect()
}

/// Unit-L2, nonnegative principal eigenvector of the adjacency matrix.
pub fn eigenvector_centrality(g: &Graph) -> Result<Vec<f64>> {
    Ok(power_iteration_top(&Adjacency(g))?.pair.vector)
}

/// Raw betweenness: for every unordered pair `{s, t}` not containing `v`, the
/// fraction of shortest `s`–`t` paths through `v`, summed. Brandes' algorithm.
pub fn betweenness_centrality(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut bc = vec![0.0; n];
    let mut stack = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        stack.clear();
        for i in 0..n {
            preds[i].clear();
            sigma[i] = 0.0;
            dist[i] = usize::MAX;
            delta[i] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                bc[w] += delta[w];
            }
        }
    }
    // every unordered pair was visited from both endpoints
    bc.iter_mut().for_each(|x| *x /= 2.0);
    bc
}

/// `1 / Σ_j d(i, j)` with hop distances.
pub fn closeness_centrality(g: &Graph) -> Result<Vec<f64>> {
    (0..g.n())
        .map(|i| {
            let mut total = 0usize;
            for d in g.bfs_distances(i) {
                match d {
                    Some(d) => total += d,
                    None => {
                        return Err(NdiError::Disconnected {
                            components: g.connected_components().num_components,
                        })
                    }
                }
            }
            Ok(if total == 0 { 0.0 } else { 1.0 / total as f64 })
        })
        .collect()
}

/// Raw node-level metric values: one row per node, one named column per metric.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    column_names: Vec<String>,
    node_labels: Vec<String>,
    values: Matrix,
}

impl MetricTable {
    pub fn new(
        column_names: Vec<String>,
        node_labels: Vec<String>,
        values: Matrix,
    ) -> Result<Self> {
        if values.cols() != column_names.len() {
            return Err(NdiError::DimensionMismatch {
                left: column_names.len(),
                right: values.cols(),
            });
        }
        if values.rows() != node_labels.len() {
            return Err(NdiError::DimensionMismatch {
                left: node_labels.len(),
                right: values.rows(),
            });
        }
        for i in 0..values.rows() {
            if let Some(j) = values.row(i).iter().position(|x| !x.is_finite()) {
                return Err(NdiError::NonFinite { row: i, column: j });
            }
        }
        Ok(MetricTable {
            column_names,
            node_labels,
            values,
        })
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.rows()
    }

    pub fn k(&self) -> usize {
        self.values.cols()
    }

    /// Same table with column `j` replaced.
    pub fn with_column(&self, j: usize, column: &[f64]) -> Result<Self> {
        let mut cols: Vec<Vec<f64>> = (0..self.k()).map(|c| self.values.column(c)).collect();
        cols[j] = column.to_vec();
        MetricTable::new(
            self.column_names.clone(),
            self.node_labels.clone(),
            Matrix::from_columns(&cols)?,
        )
    }

    /// Reads a table whose first column holds node labels and whose remaining
    /// header fields name the metrics.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.len() < 2 {
            return Err(NdiError::Invalid(
                "metric table needs a label column and at least one metric".into(),
            ));
        }
        let column_names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut labels = Vec::new();
        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            labels.push(record[0].to_string());
            let row = record
                .iter()
                .skip(1)
                .map(|s| {
                    s.parse::<f64>().map_err(|_| {
                        NdiError::Invalid(format!(
                            "row {}: cannot parse {s:?} as a number",
                            line + 2
                        ))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        MetricTable::new(column_names, labels, Matrix::from_rows(&rows)?)
    }

    /// Header `node,<column names>`, then one row per node. Labels containing
    /// commas or quotes are quoted.
    pub fn write_csv<W: Write>(&self, writer: W, precision: Option<usize>) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["node".to_string()];
        header.extend(self.column_names.iter().cloned());
        wtr.write_record(&header)?;
        for (label, row) in self.node_labels.iter().zip(self.values.iter_rows()) {
            let mut record = vec![label.clone()];
            record.extend(row.iter().map(|&x| format_number(x, precision)));
            wtr.write_record(&record)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// The default `(deg, evc, bwc, clc)` table. Requires a connected graph.
pub fn centrality_table(g: &Graph) -> Result<MetricTable> {
    g.require_connected()?;
    let columns = vec![
        degree_centrality(g),
        eigenvector_centrality(g)?,
        betweenness_centrality(g),
        closeness_centrality(g)?,
    ];
    MetricTable::new(
        DEFAULT_COLUMNS.iter().map(|s| s.to_string()).collect(),
        g.labels().to_vec(),
        Matrix::from_columns(&columns)?,
    )
}
