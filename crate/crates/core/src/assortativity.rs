//! Degree assortativity coefficients and the Hill tail estimator.
//!
//! All coefficients are computed on the remaining degrees `(deg(u)-1, deg(v)-1)`
//! of both orientations of every edge.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Graph};
use crate::rng;

/// Both orientations of every edge, as remaining degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemainingDegreePairs {
    pub pairs: Vec<(u64, u64)>,
}

pub fn remaining_degree_pairs(graph: &Graph) -> Result<RemainingDegreePairs> {
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let mut pairs = Vec::with_capacity(2 * graph.edge_count());
    for &(u, v) in graph.edges() {
        let a = graph.degree(u) as u64 - 1;
        let b = graph.degree(v) as u64 - 1;
        pairs.push((a, b));
        pairs.push((b, a));
    }
    Ok(RemainingDegreePairs { pairs })
}

/// Pearson correlation of the coordinates, `None` if either is constant.
///
/// Moments are accumulated exactly in integers, so symmetric inputs give
/// `±1` exactly at the extremes.
pub fn pearson_of_pairs(pairs: &[(u64, u64)]) -> Option<f64> {
    let n = pairs.len() as i128;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0i128, 0i128, 0i128, 0i128, 0i128);
    for &(x, y) in pairs {
        let (x, y) = (x as i128, y as i128);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx <= 0 || vy <= 0 {
        return None;
    }
    let cov = (n * sxy - sx * sy) as f64;
    let r = if vx == vy {
        cov / vx as f64
    } else {
        cov / ((vx as f64).sqrt() * (vy as f64).sqrt())
    };
    Some(r.clamp(-1.0, 1.0))
}

/// Twice the mid-rank (1-based) of each value.
fn doubled_mid_ranks(values: &[u64]) -> Vec<u64> {
    let mut sorted = values.to_vec();
    sorted.par_sort_unstable();
    values
        .iter()
        .map(|x| {
            let less = sorted.partition_point(|y| y < x) as u64;
            let upto = sorted.partition_point(|y| y <= x) as u64;
            less + upto + 1
        })
        .collect()
}

/// Pearson correlation of the mid-ranks.
pub fn spearman_of_pairs(pairs: &[(u64, u64)]) -> Option<f64> {
    let xs: Vec<u64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<u64> = pairs.iter().map(|p| p.1).collect();
    let rx = doubled_mid_ranks(&xs);
    let ry = doubled_mid_ranks(&ys);
    let ranked: Vec<(u64, u64)> = rx.into_iter().zip(ry).collect();
    pearson_of_pairs(&ranked)
}

/// Pair classification over all unordered pairs of points.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct KendallCounts {
    pub concordant: u64,
    pub discordant: u64,
    /// Pairs tied in at least one coordinate.
    pub tied: u64,
}

fn tie_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0;
    let mut run = 1u64;
    for i in 1..=sorted.len() {
        if i < sorted.len() && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total
}

/// Concordant, discordant and tied pairs in `O(N log N)`.
///
/// Points are sorted by `(x, y)`; discordant pairs are then the strict
/// inversions of the `y` sequence, counted with a Fenwick tree over the ranks
/// of `y`. Concordant pairs follow by inclusion-exclusion over the tie groups.
pub fn kendall_counts(points: &[(u64, u64)]) -> KendallCounts {
    let n = points.len() as u64;
    if n < 2 {
        return KendallCounts::default();
    }
    let mut pts = points.to_vec();
    pts.par_sort_unstable();
    let mut ys: Vec<u64> = pts.iter().map(|p| p.1).collect();
    ys.par_sort_unstable();
    ys.dedup();

    let mut tree = vec![0u64; ys.len() + 1];
    let mut inversions = 0u64;
    for (seen, &(_, y)) in pts.iter().enumerate() {
        let r = ys.partition_point(|&v| v <= y);
        // points seen so far with y' <= y
        let mut le = 0;
        let mut i = r;
        while i > 0 {
            le += tree[i];
            i &= i - 1;
        }
        inversions += seen as u64 - le;
        let mut i = r;
        while i < tree.len() {
            tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    let all = n * (n - 1) / 2;
    let tx = tie_pairs(&pts.iter().map(|p| p.0).collect::<Vec<_>>());
    let mut by_y: Vec<u64> = pts.iter().map(|p| p.1).collect();
    by_y.par_sort_unstable();
    let ty = tie_pairs(&by_y);
    let txy = tie_pairs(&pts);
    let tied = tx + ty - txy;
    KendallCounts {
        concordant: all - tied - inversions,
        discordant: inversions,
        tied,
    }
}

/// Kendall counts over pairs of oriented points from distinct edges.
///
/// The two orientations of an edge with distinct remaining degrees form a
/// discordant pair and are removed after the all-pairs count; those of an edge
/// with equal degrees are tied in both coordinates.
pub fn kendall_counts_for_graph(graph: &Graph, pairs: &RemainingDegreePairs) -> KendallCounts {
    let mut counts = kendall_counts(&pairs.pairs);
    let (mut unequal, mut equal) = (0u64, 0u64);
    for &(u, v) in graph.edges() {
        if graph.degree(u) == graph.degree(v) {
            equal += 1;
        } else {
            unequal += 1;
        }
    }
    counts.discordant -= unequal;
    counts.tied -= equal;
    counts
}

fn kendall_value(c: &KendallCounts) -> Option<f64> {
    let total = c.concordant + c.discordant;
    (total > 0).then(|| (c.concordant as f64 - c.discordant as f64) / total as f64)
}

pub fn pearson_assortativity(graph: &Graph) -> Result<Option<f64>> {
    Ok(pearson_of_pairs(&remaining_degree_pairs(graph)?.pairs))
}

pub fn spearman_assortativity(graph: &Graph) -> Result<Option<f64>> {
    Ok(spearman_of_pairs(&remaining_degree_pairs(graph)?.pairs))
}

/// `(C - D) / (C + D)` over pairs of oriented points from distinct edges.
pub fn kendall_assortativity(graph: &Graph) -> Result<Option<f64>> {
    let pairs = remaining_degree_pairs(graph)?;
    Ok(kendall_value(&kendall_counts_for_graph(graph, &pairs)))
}

/// The three coefficients with their diagnostics. `None` marks an undefined
/// coefficient and serializes as `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientReport {
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub kendall: Option<f64>,
    pub concordant: u64,
    pub discordant: u64,
    pub excluded_same_edge_pairs: u64,
    /// Share of cross-edge pairs tied in at least one coordinate.
    pub tie_fraction: f64,
    pub edges: usize,
}

pub fn coefficient_report(graph: &Graph) -> Result<CoefficientReport> {
    let pairs = remaining_degree_pairs(graph)?;
    let counts = kendall_counts_for_graph(graph, &pairs);
    let cross = counts.concordant + counts.discordant + counts.tied;
    Ok(CoefficientReport {
        pearson: pearson_of_pairs(&pairs.pairs),
        spearman: spearman_of_pairs(&pairs.pairs),
        kendall: kendall_value(&counts),
        concordant: counts.concordant,
        discordant: counts.discordant,
        excluded_same_edge_pairs: graph.edge_count() as u64,
        tie_fraction: if cross > 0 {
            counts.tied as f64 / cross as f64
        } else {
            0.0
        },
        edges: graph.edge_count(),
    })
}

/// Hill estimate of the power-law exponent `τ` from the `k` largest values.
///
/// `values` must be sorted in decreasing order. Returns `None` when the tail is
/// degenerate.
pub fn hill_estimator(values: &[f64], k: usize) -> Result<Option<f64>> {
    if k == 0 || k >= values.len() {
        return Err(Error::param(format!(
            "tail size {k} must lie in 1..{} (number of values)",
            values.len()
        )));
    }
    let pivot = values[k];
    if !(pivot > 0.0) {
        return Err(Error::param("tail values must be positive"));
    }
    let s: f64 = values[..k].iter().map(|&x| (x / pivot).ln()).sum();
    Ok((s > 0.0).then(|| 1.0 + k as f64 / s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HillEstimate {
    pub tau: Option<f64>,
    pub k_tail: usize,
}

/// Default tail size: `max(10, sqrt(#nonzero degrees))`.
pub fn default_k_tail(nonzero: usize) -> usize {
    ((nonzero as f64).sqrt() as usize).max(10)
}

/// Hill estimate on degrees made continuous by adding `U[0,1)` jitter from a
/// seeded stream. Only nonzero degrees are used.
pub fn hill_from_degrees(degrees: &DegreeSequence, k_tail: Option<usize>, seed: u64) -> Result<HillEstimate> {
    let sorted: Vec<u32> = degrees.sorted_desc().into_iter().filter(|&d| d > 0).collect();
    let k = k_tail.unwrap_or_else(|| default_k_tail(sorted.len()));
    if k < 10 || k >= sorted.len() {
        return Err(Error::param(format!(
            "tail size {k} must lie in 10..{} (number of nonzero degrees)",
            sorted.len()
        )));
    }
    if sorted[0] == sorted[k] {
        return Ok(HillEstimate { tau: None, k_tail: k });
    }
    let mut r = rng::stream(seed, rng::PHASE_JITTER, 0);
    let mut jittered: Vec<f64> = sorted.iter().map(|&d| d as f64 + r.random::<f64>()).collect();
    jittered.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(HillEstimate {
        tau: hill_estimator(&jittered, k)?,
        k_tail: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn g(edges: &[(u64, u64)]) -> Graph {
        build_graph(edges.iter().copied()).graph
    }

    fn p3() -> Graph {
        g(&[(0, 1), (1, 2)])
    }

    fn k2_k3() -> Graph {
        g(&[(0, 1), (2, 3), (3, 4), (4, 2)])
    }

    fn c5() -> Graph {
        g(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    }

    #[test]
    fn remaining_pairs_of_small_graphs() {
        assert_eq!(
            remaining_degree_pairs(&g(&[(0, 1)])).unwrap().pairs,
            vec![(0, 0), (0, 0)]
        );
        assert_eq!(
            remaining_degree_pairs(&p3()).unwrap().pairs,
            vec![(0, 1), (1, 0), (1, 0), (0, 1)]
        );
        let mut star = remaining_degree_pairs(&g(&[(0, 1), (0, 2), (0, 3)])).unwrap().pairs;
        star.sort();
        assert_eq!(star, vec![(0, 2), (0, 2), (0, 2), (2, 0), (2, 0), (2, 0)]);
        assert!(matches!(remaining_degree_pairs(&Graph::empty()), Err(Error::NoEdges)));
    }

    #[test]
    fn fixtures() {
        assert_eq!(pearson_assortativity(&p3()).unwrap(), Some(-1.0));
        assert_eq!(spearman_assortativity(&p3()).unwrap(), Some(-1.0));
        assert_eq!(kendall_assortativity(&p3()).unwrap(), Some(-1.0));
        assert_eq!(pearson_assortativity(&k2_k3()).unwrap(), Some(1.0));
        assert_eq!(spearman_assortativity(&k2_k3()).unwrap(), Some(1.0));
        assert_eq!(kendall_assortativity(&k2_k3()).unwrap(), Some(1.0));
        assert_eq!(pearson_assortativity(&c5()).unwrap(), None);
        assert_eq!(spearman_assortativity(&c5()).unwrap(), None);
        assert_eq!(kendall_assortativity(&c5()).unwrap(), None);
    }

    #[test]
    fn kendall_diagnostics() {
        let r = coefficient_report(&k2_k3()).unwrap();
        assert_eq!((r.concordant, r.discordant), (12, 0));
        let r = coefficient_report(&p3()).unwrap();
        assert_eq!((r.concordant, r.discordant), (0, 2));
        assert_eq!(r.tie_fraction, 0.5);
    }

    #[test]
    fn kendall_counts_small() {
        let c = kendall_counts(&[(1, 1), (2, 2), (3, 0), (3, 3)]);
        // (1,1)-(2,2) C, (1,1)-(3,0) D, (1,1)-(3,3) C, (2,2)-(3,0) D, (2,2)-(3,3) C, (3,0)-(3,3) tie
        assert_eq!(
            c,
            KendallCounts {
                concordant: 3,
                discordant: 2,
                tied: 1
            }
        );
    }

    #[test]
    fn hill_on_exact_pareto_quantiles() {
        let tau: f64 = 2.5;
        let n = 100_000;
        let mut xs: Vec<f64> = (0..n)
            .map(|i| (1.0 - (i as f64 + 0.5) / n as f64).powf(-1.0 / (tau - 1.0)))
            .collect();
        xs.sort_unstable_by(|a, b| b.total_cmp(a));
        let est = hill_estimator(&xs, 1000).unwrap().unwrap();
        assert!((est - tau).abs() < 0.05, "{est}");
    }

    #[test]
    fn hill_degenerate_and_bad_k() {
        let ds = DegreeSequence::from_degrees(&[4; 50]);
        assert_eq!(hill_from_degrees(&ds, Some(10), 0).unwrap().tau, None);
        assert!(hill_from_degrees(&ds, Some(5), 0).is_err());
        assert!(hill_from_degrees(&ds, Some(50), 0).is_err());
    }
}
