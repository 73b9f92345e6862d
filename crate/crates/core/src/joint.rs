//! Bucketed joint endpoint-degree statistics: joint heatmap, conditional change
//! heatmap and degree CCDF curves.
//!
//! Unlike the coefficients, these views use plain degrees `deg(u)`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_BUCKETS: usize = 21;

/// Conditioning levels of the conditional CCDF curves.
pub const CONDITIONAL_LEVELS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Logarithmic degree buckets `B_i = [b^i, b^{i+1})` with
/// `b = (d_max + 1)^{1/num_buckets}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BucketScheme {
    pub num_buckets: usize,
    pub base: f64,
    pub max_degree: usize,
}

impl BucketScheme {
    pub fn new(max_degree: usize, num_buckets: usize) -> Result<Self> {
        if max_degree < 1 {
            return Err(Error::param("bucket scheme needs a maximum degree of at least 1"));
        }
        if num_buckets < 1 {
            return Err(Error::param("bucket scheme needs at least one bucket"));
        }
        Ok(Self {
            num_buckets,
            base: ((max_degree + 1) as f64).powf(1.0 / num_buckets as f64),
            max_degree,
        })
    }

    pub fn for_graph(graph: &Graph, num_buckets: usize) -> Result<Self> {
        Self::new(graph.max_degree(), num_buckets)
    }

    /// Bucket of degree `k >= 1`. The small offset sends a degree equal to a
    /// boundary `b^i` into bucket `i` despite rounding.
    pub fn bucket(&self, k: usize) -> usize {
        if k <= 1 {
            return 0;
        }
        let i = ((k as f64).ln() / self.base.ln() + 1e-9).floor();
        (i.max(0.0) as usize).min(self.num_buckets - 1)
    }

    pub fn lower_bound(&self, i: usize) -> f64 {
        self.base.powi(i as i32)
    }

    pub fn lower_bounds(&self) -> Vec<f64> {
        (0..self.num_buckets).map(|i| self.lower_bound(i)).collect()
    }

    /// Index of the bucket conditioned on at level `c ∈ [0, 1]`.
    pub fn level_bucket(&self, c: f64) -> usize {
        ((c * (self.num_buckets - 1) as f64).round() as usize).min(self.num_buckets - 1)
    }
}

/// Counts of oriented edges `(u, v)` by `(bucket(deg u), bucket(deg v))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointHistogram {
    pub scheme: BucketScheme,
    pub counts: Vec<Vec<u64>>,
    /// Row sums of `counts`.
    pub marginal_counts: Vec<u64>,
    /// `2 |E|`.
    pub total: u64,
}

impl JointHistogram {
    pub fn probs(&self) -> Vec<Vec<f64>> {
        let t = self.total as f64;
        self.counts
            .iter()
            .map(|row| row.iter().map(|&c| c as f64 / t).collect())
            .collect()
    }

    pub fn marginals(&self) -> Vec<f64> {
        let t = self.total as f64;
        self.marginal_counts.iter().map(|&c| c as f64 / t).collect()
    }
}

pub fn joint_degree_histogram(graph: &Graph, scheme: &BucketScheme) -> Result<JointHistogram> {
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let nb = scheme.num_buckets;
    let flat = graph
        .edges()
        .par_iter()
        .fold(
            || vec![0u64; nb * nb],
            |mut acc, &(u, v)| {
                let a = scheme.bucket(graph.degree(u));
                let b = scheme.bucket(graph.degree(v));
                acc[a * nb + b] += 1;
                acc[b * nb + a] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; nb * nb],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let counts: Vec<Vec<u64>> = flat.chunks(nb).map(<[u64]>::to_vec).collect();
    let marginal_counts = counts.iter().map(|r| r.iter().sum()).collect();
    Ok(JointHistogram {
        scheme: *scheme,
        counts,
        marginal_counts,
        total: 2 * graph.edge_count() as u64,
    })
}

/// Relative change of `P[X ∈ B_i]` when conditioning on `Y ∈ B_j`.
///
/// Positive values `1 - P[X]/P[X|Y]` are increases, negative values
/// `-(1 - P[X|Y]/P[X])` decreases. Cells with an empty row or column bucket are
/// undefined (`None`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalHeatmap {
    pub scheme: BucketScheme,
    pub change: Vec<Vec<Option<f64>>>,
}

/// Signed change for a conditional/marginal ratio.
pub fn change_value(ratio: f64) -> f64 {
    if ratio >= 1.0 {
        1.0 - 1.0 / ratio
    } else {
        -(1.0 - ratio)
    }
}

pub fn conditional_change_heatmap(joint: &JointHistogram) -> ConditionalHeatmap {
    let nb = joint.scheme.num_buckets;
    let m = &joint.marginal_counts;
    let total = joint.total as u128;
    let mut change = vec![vec![None; nb]; nb];
    for i in 0..nb {
        for j in 0..nb {
            if m[i] == 0 || m[j] == 0 {
                continue;
            }
            // P[X_i | Y_j] / P[X_i] = c_ij N / (m_i m_j), symmetric in i and j
            let num = joint.counts[i][j] as u128 * total;
            let den = m[i] as u128 * m[j] as u128;
            change[i][j] = Some(change_value(num as f64 / den as f64));
        }
    }
    ConditionalHeatmap {
        scheme: joint.scheme,
        change,
    }
}

/// Points `(x, P[X >= x])` of a step CCDF at every realized value.
pub type Curve = Vec<(u32, f64)>;

/// Value of a step CCDF at any `x`.
pub fn curve_at(curve: &[(u32, f64)], x: u32) -> f64 {
    let i = curve.partition_point(|p| p.0 < x);
    curve.get(i).map_or(0.0, |p| p.1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalCurve {
    pub level: f64,
    pub bucket: usize,
    pub samples: u64,
    /// `None` when no oriented edge has its partner in the bucket.
    pub curve: Option<Curve>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CcdfCurves {
    pub scheme: BucketScheme,
    pub node: Curve,
    pub edge: Curve,
    pub conditional: Vec<ConditionalCurve>,
}

/// CCDF from a histogram `count[k]`, evaluated at every `k` with a nonzero count.
fn ccdf_from_counts(counts: &[u64]) -> Curve {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut above = total;
    for (k, &c) in counts.iter().enumerate() {
        if c > 0 {
            out.push((k as u32, above as f64 / total as f64));
            above -= c;
        }
    }
    out
}

pub fn degree_ccdf_curves(graph: &Graph, scheme: &BucketScheme) -> Result<CcdfCurves> {
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let dmax = graph.max_degree();
    let mut node = vec![0u64; dmax + 1];
    let mut edge = vec![0u64; dmax + 1];
    for v in 0..graph.vertex_count() {
        let d = graph.degree(v as u32);
        node[d] += 1;
        edge[d] += d as u64;
    }
    let mut conditional = Vec::new();
    for &level in &CONDITIONAL_LEVELS {
        let bucket = scheme.level_bucket(level);
        let mut hist = vec![0u64; dmax + 1];
        for &(u, v) in graph.edges() {
            let (du, dv) = (graph.degree(u), graph.degree(v));
            if scheme.bucket(dv) == bucket {
                hist[du] += 1;
            }
            if scheme.bucket(du) == bucket {
                hist[dv] += 1;
            }
        }
        let samples = hist.iter().sum();
        conditional.push(ConditionalCurve {
            level,
            bucket,
            samples,
            curve: (samples > 0).then(|| ccdf_from_counts(&hist)),
        });
    }
    Ok(CcdfCurves {
        scheme: *scheme,
        node: ccdf_from_counts(&node),
        edge: ccdf_from_counts(&edge),
        conditional,
    })
}

fn fmt_num(x: f64) -> String {
    format!("{x}")
}

fn write_matrix<W: Write, T>(
    scheme: &BucketScheme,
    rows: &[Vec<T>],
    cell: impl Fn(&T) -> String,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let bounds: Vec<String> = scheme.lower_bounds().into_iter().map(fmt_num).collect();
    let mut header = vec!["lower_bound".to_string()];
    header.extend(bounds.iter().cloned());
    w.write_record(&header)?;
    for (i, row) in rows.iter().enumerate() {
        let mut rec = vec![bounds[i].clone()];
        rec.extend(row.iter().map(&cell));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Joint probabilities as CSV: a header row of bucket lower bounds, then one
/// row per bucket led by its lower bound.
pub fn write_joint_csv<W: Write>(joint: &JointHistogram, out: W) -> Result<()> {
    write_matrix(&joint.scheme, &joint.probs(), |&p| fmt_num(p), out)
}

/// Change matrix as CSV; undefined cells are left empty.
pub fn write_conditional_csv<W: Write>(heat: &ConditionalHeatmap, out: W) -> Result<()> {
    write_matrix(&heat.scheme, &heat.change, |c| c.map(fmt_num).unwrap_or_default(), out)
}

/// Curves in long format: `curve,degree,ccdf`.
pub fn write_ccdf_csv<W: Write>(curves: &CcdfCurves, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["curve", "degree", "ccdf"])?;
    let mut emit = |name: &str, curve: &Curve| -> Result<()> {
        for &(k, p) in curve {
            w.write_record([name.to_string(), k.to_string(), fmt_num(p)])?;
        }
        Ok(())
    };
    emit("node", &curves.node)?;
    emit("edge", &curves.edge)?;
    for c in &curves.conditional {
        if let Some(curve) = &c.curve {
            emit(&format!("bucket_{}", c.bucket), curve)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn g(edges: &[(u64, u64)]) -> Graph {
        build_graph(edges.iter().copied()).graph
    }

    #[test]
    fn base_two_buckets() {
        let s = BucketScheme::new((1 << 21) - 1, 21).unwrap();
        assert!((s.base - 2.0).abs() < 1e-12);
        assert_eq!(s.bucket(1), 0);
        assert_eq!(s.bucket(3), 1);
        assert_eq!(s.bucket(4), 2);
        assert_eq!(s.bucket(1 << 20), 20);
        assert_eq!(s.bucket((1 << 21) - 1), 20);
        for i in 0..21 {
            assert_eq!(s.bucket(1 << i), i);
        }
    }

    #[test]
    fn single_bucket() {
        let s = BucketScheme::new(1, 1).unwrap();
        assert_eq!(s.bucket(1), 0);
        assert!(BucketScheme::new(0, 21).is_err());
        assert!(BucketScheme::new(5, 0).is_err());
    }

    #[test]
    fn p3_joint() {
        let graph = g(&[(0, 1), (1, 2)]);
        let s = BucketScheme::for_graph(&graph, 21).unwrap();
        let j = joint_degree_histogram(&graph, &s).unwrap();
        let (b1, b2) = (s.bucket(1), s.bucket(2));
        assert_ne!(b1, b2);
        let p = j.probs();
        assert_eq!(p[b1][b2], 0.5);
        assert_eq!(p[b2][b1], 0.5);
        assert_eq!(j.total, 4);
    }

    #[test]
    fn change_values() {
        assert!((change_value(0.2 / 0.1) - 0.5).abs() < 1e-12);
        assert!((change_value(0.05 / 0.1) + 0.5).abs() < 1e-12);
        assert_eq!(change_value(1.0), 0.0);
        assert_eq!(change_value(0.0), -1.0);
    }

    #[test]
    fn independent_joint_is_white() {
        let scheme = BucketScheme::new(3, 2).unwrap();
        let joint = JointHistogram {
            scheme,
            counts: vec![vec![4, 2], vec![2, 1]],
            marginal_counts: vec![6, 3],
            total: 9,
        };
        let h = conditional_change_heatmap(&joint);
        assert!(h.change.iter().flatten().all(|c| *c == Some(0.0)));
    }

    #[test]
    fn k2_k3_edge_curve() {
        let graph = g(&[(0, 1), (2, 3), (3, 4), (4, 2)]);
        let s = BucketScheme::for_graph(&graph, 21).unwrap();
        let c = degree_ccdf_curves(&graph, &s).unwrap();
        assert_eq!(curve_at(&c.edge, 2), 0.75);
        assert_eq!(curve_at(&c.node, 1), 1.0);
        assert_eq!(curve_at(&c.node, 3), 0.0);
    }

    #[test]
    fn csv_marks_undefined_cells_empty() {
        let graph = g(&[(0, 1)]);
        let s = BucketScheme::new(1, 2).unwrap();
        let h = conditional_change_heatmap(&joint_degree_histogram(&graph, &s).unwrap());
        let mut buf = Vec::new();
        write_conditional_csv(&h, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().ends_with("0,"));
    }
}
