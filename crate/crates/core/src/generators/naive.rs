use rand::Rng;

use super::{ModelParams, PositionMatrix, WeightVector};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub const NAIVE_CAP: usize = 20_000;

/// Reference sampler: one Bernoulli trial per unordered pair.
pub fn generate_naive<R: Rng + ?Sized>(
    params: &ModelParams,
    weights: Option<&WeightVector>,
    positions: Option<&PositionMatrix>,
    scale: f64,
    rng: &mut R,
) -> Result<Graph> {
    generate_naive_with_cap(params, weights, positions, scale, rng, NAIVE_CAP)
}

pub fn generate_naive_with_cap<R: Rng + ?Sized>(
    params: &ModelParams,
    weights: Option<&WeightVector>,
    positions: Option<&PositionMatrix>,
    scale: f64,
    rng: &mut R,
    cap: usize,
) -> Result<Graph> {
    params.validate()?;
    let n = params.n;
    if n > cap {
        return Err(Error::NaiveCapExceeded { n, cap });
    }
    let unit;
    let weights = match weights {
        Some(w) => w,
        None if params.model == super::Model::Rgg => {
            unit = WeightVector::new(vec![1.0; n]);
            &unit
        }
        None => return Err(Error::param("weights are required for this model")),
    };
    if weights.len() != n {
        return Err(Error::param("weight vector length differs from n"));
    }
    let positions = if params.model.is_geometric() {
        let p = positions.ok_or_else(|| Error::param("positions are required for this model"))?;
        if p.len() != n || p.dim != params.dim {
            return Err(Error::param("position matrix does not match n and dim"));
        }
        Some(p)
    } else {
        None
    };

    let kernel = params.kernel(weights.total, scale);
    let w = &weights.weights;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let dist = positions.map_or(0.0, |p| p.dist(u, v));
            let p = kernel.prob(w[u], w[v], dist);
            if p >= 1.0 || (p > 0.0 && rng.random::<f64>() < p) {
                edges.push((u as Vertex, v as Vertex));
            }
        }
    }
    Ok(Graph::from_simple_edges(n, edges))
}

#[cfg(test)]
mod tests {
    use super::super::{Model, PositionMatrix};
    use super::*;

    #[test]
    fn planted_pair_connects() {
        let mut params = ModelParams::new(Model::Tgirg, 2).sigma(0.5);
        params.target_avg_degree = None;
        let w = WeightVector::new(vec![1.0, 1.0]);
        let p = PositionMatrix::new(2, vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        let mut rng = crate::rng::stream(0, 0, 0);
        let g = generate_naive(&params, Some(&w), Some(&p), 1.0, &mut rng).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn zero_vertices() {
        let mut params = ModelParams::new(Model::ChungLu, 0);
        params.target_avg_degree = None;
        let mut rng = crate::rng::stream(0, 0, 0);
        let g = generate_naive(&params, Some(&WeightVector::new(vec![])), None, 1.0, &mut rng).unwrap();
        assert_eq!(g.vertex_count(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let params = ModelParams::new(Model::ChungLu, 50);
        let w = WeightVector::new(vec![1.0; 50]);
        let mut rng = crate::rng::stream(0, 0, 0);
        let err = generate_naive_with_cap(&params, Some(&w), None, 1.0, &mut rng, 10).unwrap_err();
        assert!(matches!(err, Error::NaiveCapExceeded { n: 50, cap: 10 }));
    }

    #[test]
    fn rgg_threshold() {
        let params = ModelParams::new(Model::Rgg, 2).dim(1).rgg_radius(0.2);
        let far = PositionMatrix::new(1, vec![0.1, 0.4]).unwrap();
        let mut rng = crate::rng::stream(0, 0, 0);
        let g = generate_naive(&params, None, Some(&far), 1.0, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 0);
        let params = ModelParams::new(Model::Rgg, 2).dim(1).rgg_radius(0.5);
        let g = generate_naive(&params, None, Some(&far), 1.0, &mut rng).unwrap();
        assert_eq!(g.edge_count(), 1);
    }
}
