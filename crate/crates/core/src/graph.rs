//! Immutable simple undirected graphs.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Simple undirected graph in CSR form.
///
/// Edges are stored once as `(u, v)` with `u < v`; adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
    labels: Option<Vec<u64>>,
}

/// Result of [`build_graph`]: the graph plus what was dropped on the way in.
#[derive(Debug, Clone)]
pub struct BuildOutcome {
    pub graph: Graph,
    pub self_loops: usize,
    pub duplicates: usize,
}

/// Builds a simple graph from raw id pairs.
///
/// Self-loops and repeated pairs (in either orientation) are dropped and counted.
/// Ids are compacted to `0..n` in first-seen order; the original ids are kept as
/// labels.
pub fn build_graph<I>(pairs: I) -> BuildOutcome
where
    I: IntoIterator<Item = (u64, u64)>,
{
    let mut ids: HashMap<u64, Vertex> = HashMap::new();
    let mut labels = Vec::new();
    let mut intern = |x: u64, labels: &mut Vec<u64>| -> Vertex {
        *ids.entry(x).or_insert_with(|| {
            labels.push(x);
            (labels.len() - 1) as Vertex
        })
    };

    let mut self_loops = 0;
    let mut edges = Vec::new();
    for (a, b) in pairs {
        let u = intern(a, &mut labels);
        let v = intern(b, &mut labels);
        if u == v {
            self_loops += 1;
            continue;
        }
        edges.push((u.min(v), u.max(v)));
    }
    let raw = edges.len();
    edges.sort_unstable();
    edges.dedup();
    let duplicates = raw - edges.len();

    let mut graph = Graph::from_sorted_unique(labels.len(), edges);
    graph.labels = Some(labels);
    BuildOutcome {
        graph,
        self_loops,
        duplicates,
    }
}

impl Graph {
    /// Graph with `n` vertices and the given edges.
    ///
    /// The edges must already be simple (no loops, no repeats); ids must be `< n`.
    /// Isolated vertices are kept, unlike [`build_graph`].
    pub fn from_simple_edges(n: usize, mut edges: Vec<(Vertex, Vertex)>) -> Self {
        for e in edges.iter_mut() {
            debug_assert!(e.0 != e.1 && (e.0 as usize) < n && (e.1 as usize) < n);
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        debug_assert!(edges.windows(2).all(|w| w[0] != w[1]));
        Self::from_sorted_unique(n, edges)
    }

    fn from_sorted_unique(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0; 2 * edges.len()];
        // edges sorted by (u, v) makes every list come out sorted except for the
        // back-references, so sort each list afterwards
        for &(u, v) in &edges {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Self {
            offsets,
            neighbors,
            edges,
            labels: None,
        }
    }

    pub fn empty() -> Self {
        Self::from_sorted_unique(0, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.offsets.windows(2).map(|w| (w[1] - w[0]) as u32).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Original ids when the graph was built from an edge list.
    pub fn labels(&self) -> Option<&[u64]> {
        self.labels.as_deref()
    }

    /// Original id of `v`, or `v` itself for generated graphs.
    pub fn label(&self, v: Vertex) -> u64 {
        self.labels.as_ref().map_or(v as u64, |l| l[v as usize])
    }

    pub fn average_degree(&self) -> f64 {
        if self.vertex_count() == 0 {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.vertex_count() as f64
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::from_degrees(&self.degrees())
    }

    /// Local clustering coefficient of `v`; zero when `deg(v) < 2`.
    pub fn local_clustering(&self, v: Vertex) -> f64 {
        let nv = self.neighbors(v);
        let k = nv.len();
        if k < 2 {
            return 0.0;
        }
        let mut links = 0usize;
        for &u in nv {
            links += sorted_intersection_count(nv, self.neighbors(u));
        }
        // every link between two neighbours was seen from both ends
        let links = links / 2;
        links as f64 / (k * (k - 1) / 2) as f64
    }

    /// Mean local clustering over all vertices.
    pub fn average_clustering(&self) -> Result<f64> {
        let n = self.vertex_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let local: Vec<f64> = (0..n as Vertex)
            .into_par_iter()
            .map(|v| self.local_clustering(v))
            .collect();
        Ok(local.iter().sum::<f64>() / n as f64)
    }

    /// Uniform edge, uniformly oriented.
    pub fn sample_edge_endpoint<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Vertex, Vertex)> {
        if self.edges.is_empty() {
            return Err(Error::NoEdges);
        }
        let (u, v) = self.edges[rng.random_range(0..self.edges.len())];
        Ok(if rng.random::<bool>() { (u, v) } else { (v, u) })
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Self {
        assert_eq!(perm.len(), self.vertex_count());
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
            .collect();
        Self::from_simple_edges(self.vertex_count(), edges)
    }
}

fn sorted_intersection_count(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Degree histogram with its complementary cumulative distribution.
///
/// Isolated vertices are included, so `ccdf(1)` is the fraction of non-isolated
/// vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeSequence {
    /// `counts[k]` = number of vertices of degree `k`.
    pub counts: Vec<usize>,
    pub max_degree: usize,
    pub vertices: usize,
}

impl DegreeSequence {
    pub fn from_degrees(degrees: &[u32]) -> Self {
        let max_degree = degrees.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0usize; max_degree + 1];
        for &d in degrees {
            counts[d as usize] += 1;
        }
        Self {
            counts,
            max_degree,
            vertices: degrees.len(),
        }
    }

    /// Fraction of vertices with degree `>= k`.
    pub fn ccdf(&self, k: usize) -> f64 {
        if self.vertices == 0 {
            return 0.0;
        }
        if k > self.max_degree {
            return 0.0;
        }
        let above: usize = self.counts[k..].iter().sum();
        above as f64 / self.vertices as f64
    }

    /// `(k, ccdf(k))` at every degree value that occurs.
    pub fn ccdf_points(&self) -> Vec<(u32, f64)> {
        let mut out = Vec::new();
        let mut above = self.vertices;
        for (k, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                out.push((k as u32, above as f64 / self.vertices as f64));
            }
            above -= c;
        }
        out
    }

    /// Degrees in non-increasing order, expanded from the histogram.
    pub fn sorted_desc(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.vertices);
        for (k, &c) in self.counts.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(k as u32, c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(pairs: &[(u64, u64)]) -> Graph {
        build_graph(pairs.iter().copied()).graph
    }

    #[test]
    fn drops_loops_and_duplicates() {
        let out = build_graph([(0, 1), (1, 0), (1, 1)]);
        assert_eq!(out.graph.edge_count(), 1);
        assert_eq!(out.graph.vertex_count(), 2);
        assert_eq!(out.duplicates, 1);
        assert_eq!(out.self_loops, 1);
    }

    #[test]
    fn empty_input_is_an_empty_graph() {
        let out = build_graph(std::iter::empty());
        assert_eq!(out.graph.vertex_count(), 0);
        assert_eq!(out.graph.edge_count(), 0);
    }

    #[test]
    fn compacts_ids_in_first_seen_order() {
        let gr = g(&[(10, 7), (7, 42)]);
        assert_eq!(gr.labels().unwrap(), &[10, 7, 42]);
        assert_eq!(gr.degree(1), 2);
        assert!(gr.has_edge(0, 1) && gr.has_edge(1, 2) && !gr.has_edge(0, 2));
    }

    #[test]
    fn triangle() {
        let t = g(&[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(t.degrees(), vec![2, 2, 2]);
        assert_eq!(t.edge_count(), 3);
        for v in 0..3 {
            assert_eq!(t.local_clustering(v), 1.0);
        }
        assert_eq!(t.average_clustering().unwrap(), 1.0);
    }

    #[test]
    fn path_has_no_clustering() {
        let p = g(&[(0, 1), (1, 2)]);
        assert_eq!(p.local_clustering(1), 0.0);
        assert_eq!(p.average_clustering().unwrap(), 0.0);
    }

    #[test]
    fn k4_minus_edge() {
        let k = g(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        let avg = k.average_clustering().unwrap();
        assert!((avg - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn clustering_of_empty_graph_is_error() {
        assert!(matches!(Graph::empty().average_clustering(), Err(Error::EmptyGraph)));
    }

    #[test]
    fn endpoint_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(Graph::empty().sample_edge_endpoint(&mut rng).is_err());

        let p3 = g(&[(0, 1), (1, 2)]);
        let trials = 40_000;
        let mut deg2 = 0;
        for _ in 0..trials {
            let (u, _) = p3.sample_edge_endpoint(&mut rng).unwrap();
            if p3.degree(u) == 2 {
                deg2 += 1;
            }
        }
        let frac = deg2 as f64 / trials as f64;
        assert!((frac - 0.5).abs() < 0.01, "{frac}");
    }

    #[test]
    fn ccdf_bounds() {
        let s = g(&[(0, 1), (0, 2), (0, 3)]).degree_sequence();
        assert_eq!(s.ccdf(0), 1.0);
        assert_eq!(s.ccdf(s.max_degree + 1), 0.0);
        assert_eq!(s.ccdf(2), 0.25);
        assert_eq!(s.sorted_desc(), vec![3, 1, 1, 1]);
    }

    #[test]
    fn isolated_vertices_are_kept_by_from_simple_edges() {
        let gr = Graph::from_simple_edges(5, vec![(3, 1)]);
        assert_eq!(gr.vertex_count(), 5);
        assert_eq!(gr.edges(), &[(1, 3)]);
        assert_eq!(gr.degree_sequence().ccdf(1), 0.4);
    }
}
