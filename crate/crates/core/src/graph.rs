//! Simple undirected graphs with string labels and edge-list ingestion.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{NdiError, Result};

/// Counts of input lines that were accepted but altered during parsing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseWarnings {
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

/// Simple undirected graph. Node `i` carries `labels[i]`; neighbor lists are
/// sorted and free of duplicates and self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adjacency: Vec<Vec<usize>>,
    m_edges: usize,
    warnings: ParseWarnings,
}

impl Graph {
    /// Parses a whitespace-separated edge list.
    ///
    /// Lines starting with `#` or `%` and blank lines are skipped, tokens after
    /// the first two are ignored. Labels get dense indices in first-seen order.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let mut warnings = ParseWarnings::default();

        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
                return Err(NdiError::Parse { line: lineno + 1 });
            };
            let mut intern = |label| -> usize {
                *index.entry(label).or_insert_with(|| {
                    labels.push(label.to_string());
                    labels.len() - 1
                })
            };
            let u = intern(a);
            let v = intern(b);
            if u == v {
                warnings.self_loops += 1;
                continue;
            }
            edges.push((u, v));
        }

        let mut graph = Graph::build(labels, &edges);
        if graph.m_edges == 0 {
            return Err(NdiError::EmptyGraph);
        }
        warnings.duplicate_edges = edges.len() - graph.m_edges;
        graph.warnings = warnings;
        Ok(graph)
    }

    /// Builds a graph on nodes `0..n` labelled by their index.
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(NdiError::NodeOutOfRange { index: x, n });
                }
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<_> = edges.iter().copied().filter(|(u, v)| u != v).collect();
        Ok(Graph::build(labels, &edges))
    }

    fn build(labels: Vec<String>, edges: &[(usize, usize)]) -> Graph {
        let mut adjacency = vec![Vec::new(); labels.len()];
        for &(u, v) in edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        let m_edges = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            labels,
            adjacency,
            m_edges,
            warnings: ParseWarnings::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m_edges(&self) -> usize {
        self.m_edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn warnings(&self) -> ParseWarnings {
        self.warnings
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.m_edges as f64 / self.n() as f64
    }

    /// Each edge once as `(u, v)` with `u < v`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Serializes to the edge-list format accepted by [`Graph::parse_edge_list`].
    ///
    /// Isolated nodes cannot be represented and are lost.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.labels[u], self.labels[v]);
        }
        out
    }

    /// Breadth-first hop distances from `source`; unreachable nodes are `None`.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn connected_components(&self) -> ComponentLabeling {
        let n = self.n();
        let mut component_id = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if component_id[start] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let mut size = 0;
            component_id[start] = id;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &w in &self.adjacency[u] {
                    if component_id[w] == usize::MAX {
                        component_id[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            sizes.push(size);
        }
        // Ids are assigned in order of each component's smallest node, so the
        // first maximum is the tie-break winner.
        let largest = sizes
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, usize)>, (id, &s)| match best {
                Some((_, bs)) if bs >= s => best,
                _ => Some((id, s)),
            })
            .map(|(id, _)| id);
        let largest_component_nodes = match largest {
            Some(id) => (0..n).filter(|&i| component_id[i] == id).collect(),
            None => Vec::new(),
        };
        ComponentLabeling {
            component_id,
            num_components: sizes.len(),
            largest_component_nodes,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().num_components <= 1
    }

    pub fn require_connected(&self) -> Result<()> {
        let components = self.connected_components().num_components;
        if components > 1 {
            return Err(NdiError::Disconnected { components });
        }
        Ok(())
    }

    /// Subgraph induced by `nodes`, relabelled densely in the order given.
    /// Repeated indices are ignored after their first occurrence.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Graph> {
        let n = self.n();
        let mut new_index = vec![usize::MAX; n];
        let mut labels = Vec::with_capacity(nodes.len());
        for &v in nodes {
            if v >= n {
                return Err(NdiError::NodeOutOfRange { index: v, n });
            }
            if new_index[v] == usize::MAX {
                new_index[v] = labels.len();
                labels.push(self.labels[v].clone());
            }
        }
        let edges: Vec<_> = self
            .edges()
            .filter(|&(u, v)| new_index[u] != usize::MAX && new_index[v] != usize::MAX)
            .map(|(u, v)| (new_index[u], new_index[v]))
            .collect();
        Ok(Graph::build(labels, &edges))
    }

    pub fn largest_component(&self) -> Graph {
        let labeling = self.connected_components();
        self.induced_subgraph(&labeling.largest_component_nodes)
            .expect("component nodes are in range")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub component_id: Vec<usize>,
    pub num_components: usize,
    /// Sorted ascending. Ties on size go to the component holding the smaller
    /// minimum node index.
    pub largest_component_nodes: Vec<usize>,
}
