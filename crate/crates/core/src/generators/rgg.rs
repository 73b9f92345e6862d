use rand::Rng;

use super::girg::sample_girg_edges;
use super::{sample_positions, Alpha, PositionMatrix};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Radius giving expected degree `(n-1) (2r)^d = avg`.
pub fn radius_for_avg_degree(n: usize, dim: usize, avg: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::param("an rgg with a target degree needs n >= 2"));
    }
    let r = 0.5 * (avg / (n - 1) as f64).powf(1.0 / dim as f64);
    if !(r > 0.0 && r <= 0.5) {
        return Err(Error::param(format!(
            "average degree {avg} needs radius {r} outside (0, 1/2]"
        )));
    }
    Ok(r)
}

/// Threshold edges `dist <= r`, via the GIRG cell structure with unit weights.
pub(crate) fn rgg_edges(positions: &PositionMatrix, r: f64, seed: u64, workers: usize) -> Vec<(Vertex, Vertex)> {
    let n = positions.len();
    let dim = positions.dim as i32;
    let unit = vec![1.0; n];
    // W dist^d <= c  <=>  dist <= r; the slack keeps boundary pairs proposed
    // and `accept` applies the exact rule
    let scale = n as f64 * r.powi(dim) * (1.0 + 1e-9);
    sample_girg_edges(
        &unit,
        positions,
        Alpha::Infinite,
        scale,
        seed,
        workers,
        |_, _, d, _, _| d <= r,
    )
    .expect("positions match weights")
}

/// Threshold random geometric graph on the `d`-torus under the max-norm.
pub fn generate_rgg<R: Rng + ?Sized>(n: usize, d: usize, r: f64, rng: &mut R) -> Result<Graph> {
    if !(r > 0.0 && r <= 0.5) {
        return Err(Error::param(format!("rgg radius must lie in (0, 1/2], got {r}")));
    }
    if d == 0 || d > super::MAX_DIM {
        return Err(Error::param(format!("dimension must lie in 1..={}", super::MAX_DIM)));
    }
    let positions = sample_positions(n, d, rng);
    let seed = rng.random();
    Ok(Graph::from_simple_edges(n, rgg_edges(&positions, r, seed, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn two_vertices_at_max_radius_connect() {
        for s in 0..20 {
            let g = generate_rgg(2, 2, 0.5, &mut rng::stream(s, 0, 0)).unwrap();
            assert_eq!(g.edge_count(), 1);
        }
    }

    #[test]
    fn planted_points_beyond_radius() {
        let p = PositionMatrix::new(1, vec![0.1, 0.4]).unwrap();
        assert!(rgg_edges(&p, 0.2, 0, 0).is_empty());
        assert_eq!(rgg_edges(&p, 0.31, 0, 0).len(), 1);
    }

    #[test]
    fn matches_brute_force() {
        let mut r = rng::stream(8, 0, 0);
        let pos = sample_positions(800, 2, &mut r);
        let mut got = rgg_edges(&pos, 0.03, 1, 0);
        for e in got.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        got.sort_unstable();
        let mut expect = Vec::new();
        for u in 0..800 {
            for v in u + 1..800 {
                if pos.dist(u, v) <= 0.03 {
                    expect.push((u as Vertex, v as Vertex));
                }
            }
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn mean_degree_matches_volume() {
        let n = 10_000;
        let r = 5.0 / (2.0 * (n - 1) as f64);
        let g = generate_rgg(n, 1, r, &mut rng::stream(3, 0, 0)).unwrap();
        assert!((g.average_degree() - 5.0).abs() < 0.2, "{}", g.average_degree());
    }

    #[test]
    fn bad_radius() {
        assert!(generate_rgg(10, 1, 0.0, &mut rng::stream(0, 0, 0)).is_err());
        assert!(generate_rgg(10, 1, 0.51, &mut rng::stream(0, 0, 0)).is_err());
        assert!(radius_for_avg_degree(10, 1, 20.0).is_err());
    }
}
