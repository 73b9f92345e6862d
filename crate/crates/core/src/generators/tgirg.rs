use rand::Rng;

use super::girg::sample_girg_edges;
use super::kernel::Kernel;
use super::{supergraph_weights, Alpha, Instance, ModelParams, PositionMatrix, WeightVector};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Kernel scale of the dominating GIRG.
///
/// For `σ > 1` the domination argument sends pairs with a large smaller weight
/// to probability one through `w'_u w'_v / W' > 1`; with the distance capped at
/// 1/2 this needs a scale of at least `2^{-d}`.
pub fn supergraph_scale(sigma: f64, scale: f64, dim: usize) -> f64 {
    if sigma > 1.0 {
        scale.max(2f64.powi(-(dim as i32)))
    } else {
        scale
    }
}

/// Edges of a TGIRG on given latent variables.
///
/// A classical GIRG on [`supergraph_weights`] is sampled and each of its edges
/// is kept with probability `p_uv / p'_uv`, so every pair ends up present
/// independently with exactly its TGIRG probability.
pub fn sample_tgirg_edges(
    weights: &WeightVector,
    positions: &PositionMatrix,
    sigma: f64,
    alpha: Alpha,
    scale: f64,
    seed: u64,
    workers: usize,
) -> Result<Vec<(Vertex, Vertex)>> {
    if positions.len() != weights.len() {
        return Err(Error::param("positions and weights differ in length"));
    }
    let dim = positions.dim;
    if sigma == 1.0 {
        return sample_girg_edges(
            &weights.weights,
            positions,
            alpha,
            scale,
            seed,
            workers,
            |_, _, _, _, _| true,
        );
    }
    let target = Kernel::geometric(sigma, alpha, dim, scale, weights.total);
    let sup = supergraph_weights(weights, sigma);
    let sup_scale = supergraph_scale(sigma, scale, dim);
    let w = &weights.weights;
    sample_girg_edges(
        &sup.weights,
        positions,
        alpha,
        sup_scale,
        seed,
        workers,
        |u, v, dist, p_sup, rng| {
            let p = target.prob(w[u as usize], w[v as usize], dist);
            debug_assert!(
                p <= p_sup * (1.0 + 1e-9) + 1e-12,
                "supergraph does not dominate: {p} > {p_sup}"
            );
            p >= p_sup || rng.random::<f64>() * p_sup < p
        },
    )
}

/// Fast TGIRG (or GIRG) sampler drawing its own latent variables from the seed
/// in `params`.
pub fn generate_tgirg_fast(params: &ModelParams, scale: f64, workers: usize) -> Result<Instance> {
    params.validate()?;
    if !params.model.is_geometric() || params.model == super::Model::Rgg {
        return Err(Error::param("the fast TGIRG sampler needs model girg or tgirg"));
    }
    let weights = super::latent_weights(params)?;
    let positions = super::latent_positions(params);
    let edges = sample_tgirg_edges(
        &weights,
        &positions,
        params.effective_sigma(),
        params.alpha,
        scale,
        params.seed,
        workers,
    )?;
    Ok(Instance {
        graph: Graph::from_simple_edges(params.n, edges),
        weights: Some(weights),
        positions: Some(positions),
        scale,
    })
}
