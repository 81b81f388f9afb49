//! Graph generators and brute-force oracles shared by the integration tests.
//! Nothing here calls into the code paths it is used to check.

#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use ndi_core::Graph;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
}

/// Looks for `file` in the bundled fixtures, then in `$NDI_DATASETS_DIR`.
pub fn find_dataset(file: &str) -> Option<PathBuf> {
    let bundled = data_dir().join(file);
    if bundled.exists() {
        return Some(bundled);
    }
    let dir = std::env::var_os("NDI_DATASETS_DIR")?;
    let path = PathBuf::from(dir).join(file);
    path.exists().then_some(path)
}

pub fn load_graph(file: &str) -> Option<Graph> {
    let path = find_dataset(file)?;
    let text = std::fs::read_to_string(path).ok()?;
    Graph::parse_edge_list(&text).ok()
}

pub fn karate() -> Graph {
    load_graph("karate.txt").expect("bundled karate fixture")
}

pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_index_edges(n, &edges).unwrap()
}

pub fn cycle_graph(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_index_edges(n, &edges).unwrap()
}

pub fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Graph::from_index_edges(n, &edges).unwrap()
}

/// Eight nodes: two hubs (2 and 5) bridged through a triangle-rich core, and
/// a pendant node 0 hanging off node 1.
pub fn toy_graph() -> Graph {
    Graph::from_index_edges(
        8,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (2, 4),
            (2, 5),
            (3, 4),
            (3, 5),
            (5, 6),
            (5, 7),
            (6, 7),
        ],
    )
    .unwrap()
}

/// Random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = HashSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.insert((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.insert((a, b));
            }
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    edges
}

pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (rng.gen_range(0..i), i)).collect()
}

/// G(n, p), restricted to its largest component by the caller.
pub fn erdos_renyi<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Preferential attachment: each new node links to `m` distinct existing
/// nodes chosen proportionally to degree.
pub fn barabasi_albert<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut targets: Vec<usize> = Vec::new();
    for i in 0..=m {
        for j in 0..i {
            edges.push((j, i));
            targets.push(i);
            targets.push(j);
        }
    }
    for v in m + 1..n {
        let mut chosen = HashSet::new();
        while chosen.len() < m {
            chosen.insert(*targets.choose(rng).unwrap());
        }
        let mut chosen: Vec<_> = chosen.into_iter().collect();
        chosen.sort_unstable();
        for u in chosen {
            edges.push((u, v));
            targets.push(u);
            targets.push(v);
        }
    }
    edges
}

/// Floyd–Warshall hop distances; unreachable pairs stay at `usize::MAX / 4`.
pub fn all_pairs_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    const INF: usize = usize::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Betweenness by listing every shortest path of every unordered pair.
pub fn brute_force_betweenness(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let dist = all_pairs_distances(n, edges);
    let mut bc = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut current = vec![s];
            enumerate_paths(&adj, &dist[t], dist[s][t], &mut current, &mut paths);
            let total = paths.len() as f64;
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    bc[v] += 1.0 / total;
                }
            }
        }
    }
    bc
}

/// Extends `current` along every walk that stays exactly on a shortest route
/// to the target (`to_target[v]` is the hop distance from `v` to it).
fn enumerate_paths(
    adj: &[Vec<usize>],
    to_target: &[usize],
    remaining: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    let last = *current.last().unwrap();
    for &w in &adj[last] {
        if to_target[w] == remaining - 1 {
            current.push(w);
            enumerate_paths(adj, to_target, remaining - 1, current, out);
            current.pop();
        }
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Pearson correlation from the textbook formula.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}
