use rand::Rng;
use rayon::prelude::*;

use super::kernel::Kernel;
use super::WeightVector;
use crate::graph::Vertex;
use crate::rng::{self, StreamRng};

const BLOCK: usize = 256;

/// Number of failures before the first success of a Bernoulli(`p`) sequence.
#[inline]
pub(crate) fn geometric_skip(rng: &mut StreamRng, p: f64) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    let u = 1.0 - rng.random::<f64>();
    let s = u.ln() / (-p).ln_1p();
    if s >= u64::MAX as f64 {
        u64::MAX
    } else {
        s as u64
    }
}

/// Edges of a (tunable) Chung-Lu graph in expected `O(n + m)` time.
///
/// Vertices are visited in order of decreasing weight. For a fixed heavier
/// endpoint `u`, the kernel `c w_u w_v^σ / W` is non-increasing along the order,
/// so candidates are skipped geometrically with the current probability and
/// thinned to the exact one.
pub fn sample_chung_lu_edges(
    weights: &WeightVector,
    sigma: f64,
    scale: f64,
    seed: u64,
    workers: usize,
) -> Vec<(Vertex, Vertex)> {
    let n = weights.len();
    let w = &weights.weights;
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.sort_by(|&a, &b| w[b as usize].total_cmp(&w[a as usize]).then(a.cmp(&b)));
    let kernel = Kernel::plain(sigma, scale, weights.total);

    let blocks: Vec<Vec<(Vertex, Vertex)>> = rng::with_workers(workers, || {
        (0..n.div_ceil(BLOCK))
            .into_par_iter()
            .map(|block| {
                let mut rng = rng::stream(seed, rng::PHASE_EDGES, block as u64);
                let mut out = Vec::new();
                for a in block * BLOCK..((block + 1) * BLOCK).min(n) {
                    let u = order[a];
                    let wu = w[u as usize];
                    let mut b = a + 1;
                    if b >= n {
                        continue;
                    }
                    let mut q = kernel.prob(wu, w[order[b] as usize], 0.0);
                    while q > 0.0 {
                        let skip = geometric_skip(&mut rng, q);
                        if skip >= (n - b) as u64 {
                            break;
                        }
                        b += skip as usize;
                        let v = order[b];
                        let p = kernel.prob(wu, w[v as usize], 0.0);
                        if p >= q || rng.random::<f64>() * q < p {
                            out.push((u, v));
                        }
                        q = p;
                        b += 1;
                        if b >= n {
                            break;
                        }
                    }
                }
                out
            })
            .collect()
    });
    blocks.concat()
}
