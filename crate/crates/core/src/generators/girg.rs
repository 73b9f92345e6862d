//! Expected linear-time sampling of classical GIRGs.
//!
//! Vertices are split into weight layers `[w_0 2^i, w_0 2^{i+1})` and each layer
//! is sorted along a Morton curve, so that every cell of the dyadic grid at any
//! level is a contiguous run. For a pair of layers `(i, j)` the grid level is
//! the finest one whose cells are still larger than the distance at which the
//! kernel saturates. Pairs of vertices in neighbouring cells at that level are
//! tested one by one. All remaining pairs are covered exactly once by pairs of
//! cells that are not neighbours at some coarser level but whose parents are;
//! there the distance is bounded below by the gap between the cells, and pairs
//! are drawn by geometric jumps with that upper bound and then thinned.
//!
//! At zero temperature the second kind never produces edges and is skipped.

use rand::Rng;
use rayon::prelude::*;

use super::chung_lu::geometric_skip;
use super::geometry::torus_dist;
use super::{Alpha, PositionMatrix};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::rng::{self, StreamRng};

/// Largest supported dimension of the ground space.
pub const MAX_DIM: usize = 16;

/// Kernel of the dominating GIRG: `min{c w_u w_v / (W dist^d), 1}^α`.
#[derive(Debug, Clone, Copy)]
struct GirgKernel {
    alpha: Alpha,
    dim: i32,
    scale: f64,
    total: f64,
}

impl GirgKernel {
    #[inline]
    fn prob(&self, wu: f64, wv: f64, dist: f64) -> f64 {
        if dist == 0.0 {
            return 1.0;
        }
        let num = self.scale * wu * wv;
        let den = self.total * dist.powi(self.dim);
        match self.alpha {
            Alpha::Infinite => (den <= num) as u8 as f64,
            Alpha::Finite(a) => {
                let q = num / den;
                if q >= 1.0 {
                    1.0
                } else {
                    q.powf(a)
                }
            }
        }
    }
}

struct Layer {
    codes: Vec<u64>,
    verts: Vec<Vertex>,
    max_weight: f64,
}

struct Grid {
    dim: usize,
    bits: u32,
}

impl Grid {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            bits: (64 / dim as u32).min(32),
        }
    }

    fn code(&self, p: &[f64]) -> u64 {
        let side = 1u64 << self.bits;
        let mut q = [0u64; MAX_DIM];
        for (k, &x) in p.iter().enumerate() {
            q[k] = ((x * side as f64) as u64).min(side - 1);
        }
        self.interleave(&q[..self.dim], self.bits)
    }

    /// Morton code of cell coordinates with `bits` bits each.
    fn interleave(&self, coords: &[u64], bits: u32) -> u64 {
        let mut code = 0u64;
        for b in (0..bits).rev() {
            for &c in coords {
                code = (code << 1) | ((c >> b) & 1);
            }
        }
        code
    }

    fn deinterleave(&self, code: u64, bits: u32, out: &mut [u64]) {
        out.iter_mut().for_each(|c| *c = 0);
        let d = self.dim as u32;
        for b in 0..bits {
            for (k, c) in out.iter_mut().enumerate().take(self.dim) {
                let bit = (code >> (b * d + (d - 1 - k as u32))) & 1;
                *c |= bit << b;
            }
        }
    }

    fn shift(&self, level: u32) -> u32 {
        (self.bits - level) * self.dim as u32
    }

    /// Index range in a Morton-sorted code list covered by a cell.
    fn cell_range(&self, codes: &[u64], cell: u64, level: u32) -> (usize, usize) {
        let s = self.shift(level);
        let lo = (cell as u128) << s;
        let hi = ((cell as u128) + 1) << s;
        let a = codes.partition_point(|&c| (c as u128) < lo);
        let b = a + codes[a..].partition_point(|&c| (c as u128) < hi);
        (a, b)
    }

    /// Runs of equal cells at `level` as `(cell, start, end)`.
    fn runs(&self, codes: &[u64], level: u32) -> Vec<(u64, usize, usize)> {
        let s = self.shift(level);
        let key = |c: u64| if s >= 64 { 0 } else { c >> s };
        let mut out = Vec::new();
        let mut start = 0;
        while start < codes.len() {
            let cell = key(codes[start]);
            let mut end = start + 1;
            while end < codes.len() && key(codes[end]) == cell {
                end += 1;
            }
            out.push((cell, start, end));
            start = end;
        }
        out
    }

    /// Cells at `level` whose coordinates differ from `coords` by at most one
    /// (cyclically) in every dimension, deduplicated.
    fn neighbours(&self, coords: &[u64], level: u32) -> Vec<u64> {
        let side = 1u64 << level;
        let mut out = Vec::with_capacity(3usize.pow(self.dim as u32));
        let mut cur = [0u64; MAX_DIM];
        let total = 3usize.pow(self.dim as u32);
        for mut idx in 0..total {
            for k in 0..self.dim {
                let off = (idx % 3) as u64;
                idx /= 3;
                cur[k] = (coords[k] + side + off - 1) % side;
            }
            out.push(self.interleave(&cur[..self.dim], level));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Largest cyclic coordinate difference between two cells at `level`.
    fn cell_gap(&self, a: &[u64], b: &[u64], level: u32) -> u64 {
        let side = 1u64 << level;
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let d = x.abs_diff(y);
                d.min(side - d)
            })
            .max()
            .unwrap_or(0)
    }
}

/// Edges of a GIRG with `weights` and `positions`, each proposed with its exact
/// probability and then passed to `accept` together with the torus distance and
/// that probability. Returning `false` drops the edge.
///
/// Work is split by layer pair, each with its own RNG stream, so the output is
/// independent of the thread count.
pub fn sample_girg_edges<F>(
    weights: &[f64],
    positions: &PositionMatrix,
    alpha: Alpha,
    scale: f64,
    seed: u64,
    workers: usize,
    accept: F,
) -> Result<Vec<(Vertex, Vertex)>>
where
    F: Fn(Vertex, Vertex, f64, f64, &mut StreamRng) -> bool + Sync,
{
    let n = weights.len();
    let dim = positions.dim;
    if positions.len() != n {
        return Err(Error::param("positions and weights differ in length"));
    }
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::param(format!("dimension must lie in 1..={MAX_DIM}")));
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let total: f64 = weights.iter().sum();
    let kernel = GirgKernel {
        alpha,
        dim: dim as i32,
        scale,
        total,
    };
    let grid = Grid::new(dim);

    let w_min = weights.iter().copied().fold(f64::INFINITY, f64::min);
    let layer_of = |w: f64| ((w / w_min).log2().floor().max(0.0)) as usize;
    let num_layers = weights.iter().map(|&w| layer_of(w)).max().unwrap_or(0) + 1;
    let mut members: Vec<Vec<(u64, Vertex)>> = vec![Vec::new(); num_layers];
    for (v, &w) in weights.iter().enumerate() {
        members[layer_of(w)].push((grid.code(positions.point(v)), v as Vertex));
    }
    let layers: Vec<Layer> = members
        .into_iter()
        .map(|mut m| {
            m.sort_unstable();
            let max_weight = m.iter().map(|&(_, v)| weights[v as usize]).fold(0.0, f64::max);
            Layer {
                codes: m.iter().map(|e| e.0).collect(),
                verts: m.iter().map(|e| e.1).collect(),
                max_weight,
            }
        })
        .filter(|l| !l.verts.is_empty())
        .collect();

    let pairs: Vec<(usize, usize)> = (0..layers.len())
        .flat_map(|i| (i..layers.len()).map(move |j| (i, j)))
        .collect();
    let ctx = Ctx {
        weights,
        positions,
        kernel,
        grid: &grid,
        layers: &layers,
        accept: &accept,
    };
    let chunks: Vec<Vec<(Vertex, Vertex)>> = rng::with_workers(workers, || {
        pairs
            .par_iter()
            .enumerate()
            .map(|(task, &(i, j))| {
                let mut rng = rng::stream(seed, rng::PHASE_EDGES, task as u64);
                ctx.layer_pair(i, j, &mut rng)
            })
            .collect()
    });
    Ok(chunks.concat())
}

struct Ctx<'a, F> {
    weights: &'a [f64],
    positions: &'a PositionMatrix,
    kernel: GirgKernel,
    grid: &'a Grid,
    layers: &'a [Layer],
    accept: &'a F,
}

impl<F> Ctx<'_, F>
where
    F: Fn(Vertex, Vertex, f64, f64, &mut StreamRng) -> bool + Sync,
{
    /// Finest level whose cell volume strictly exceeds the saturation volume.
    fn target_level(&self, wi: f64, wj: f64) -> u32 {
        let vol = self.kernel.scale * wi * wj / self.kernel.total;
        let d = self.grid.dim as i32;
        let cell_vol = |l: u32| 2f64.powi(-(l as i32) * d);
        let mut l = 0u32;
        while l < self.grid.bits && cell_vol(l + 1) > vol {
            l += 1;
        }
        l
    }

    fn layer_pair(&self, i: usize, j: usize, rng: &mut StreamRng) -> Vec<(Vertex, Vertex)> {
        let (li, lj) = (&self.layers[i], &self.layers[j]);
        let level = self.target_level(li.max_weight, lj.max_weight);
        let mut out = Vec::new();
        self.near_pairs(i, j, level, rng, &mut out);
        if let Alpha::Finite(_) = self.kernel.alpha {
            for l in 2..=level {
                self.far_pairs(i, j, l, rng, &mut out);
            }
        }
        out
    }

    #[inline]
    fn try_pair(&self, a: Vertex, b: Vertex, rng: &mut StreamRng, out: &mut Vec<(Vertex, Vertex)>) {
        let dist = torus_dist(self.positions.point(a as usize), self.positions.point(b as usize));
        let p = self
            .kernel
            .prob(self.weights[a as usize], self.weights[b as usize], dist);
        if (p >= 1.0 || (p > 0.0 && rng.random::<f64>() < p)) && (self.accept)(a, b, dist, p, rng) {
            out.push((a, b));
        }
    }

    /// Exhaustive test of all pairs in neighbouring cells at `level`.
    fn near_pairs(&self, i: usize, j: usize, level: u32, rng: &mut StreamRng, out: &mut Vec<(Vertex, Vertex)>) {
        let (li, lj) = (&self.layers[i], &self.layers[j]);
        let mut coords = [0u64; MAX_DIM];
        for (cell, s, e) in self.grid.runs(&li.codes, level) {
            self.grid.deinterleave(cell, level, &mut coords[..self.grid.dim]);
            for other in self.grid.neighbours(&coords[..self.grid.dim], level) {
                if i == j && other < cell {
                    continue;
                }
                if i == j && other == cell {
                    for x in s..e {
                        for y in x + 1..e {
                            self.try_pair(li.verts[x], li.verts[y], rng, out);
                        }
                    }
                    continue;
                }
                let (s2, e2) = self.grid.cell_range(&lj.codes, other, level);
                for x in s..e {
                    for y in s2..e2 {
                        self.try_pair(li.verts[x], lj.verts[y], rng, out);
                    }
                }
            }
        }
    }

    /// Pairs of cells at `level` that are not neighbours but have neighbouring
    /// parents.
    fn far_pairs(&self, i: usize, j: usize, level: u32, rng: &mut StreamRng, out: &mut Vec<(Vertex, Vertex)>) {
        let (li, lj) = (&self.layers[i], &self.layers[j]);
        let dim = self.grid.dim;
        let cell_side = 2f64.powi(-(level as i32));
        let mut coords = [0u64; MAX_DIM];
        let mut parent = [0u64; MAX_DIM];
        let mut pc = [0u64; MAX_DIM];
        let mut child = [0u64; MAX_DIM];
        for (cell, s, e) in self.grid.runs(&li.codes, level) {
            self.grid.deinterleave(cell, level, &mut coords[..dim]);
            for k in 0..dim {
                parent[k] = coords[k] >> 1;
            }
            for pcell in self.grid.neighbours(&parent[..dim], level - 1) {
                self.grid.deinterleave(pcell, level - 1, &mut pc[..dim]);
                for ofs in 0..(1u64 << dim) {
                    for k in 0..dim {
                        child[k] = 2 * pc[k] + ((ofs >> k) & 1);
                    }
                    let gap = self.grid.cell_gap(&coords[..dim], &child[..dim], level);
                    if gap <= 1 {
                        continue;
                    }
                    let other = self.grid.interleave(&child[..dim], level);
                    if i == j && other < cell {
                        continue;
                    }
                    let (s2, e2) = self.grid.cell_range(&lj.codes, other, level);
                    if s2 == e2 {
                        continue;
                    }
                    let dist_lb = (gap - 1) as f64 * cell_side;
                    let bound = self.kernel.prob(li.max_weight, lj.max_weight, dist_lb);
                    if bound <= 0.0 {
                        continue;
                    }
                    let nb = (e2 - s2) as u64;
                    let total = (e - s) as u64 * nb;
                    let mut idx = 0u64;
                    loop {
                        let skip = geometric_skip(rng, bound);
                        if skip >= total - idx {
                            break;
                        }
                        idx += skip;
                        let a = li.verts[s + (idx / nb) as usize];
                        let b = lj.verts[s2 + (idx % nb) as usize];
                        let dist = torus_dist(self.positions.point(a as usize), self.positions.point(b as usize));
                        let p = self
                            .kernel
                            .prob(self.weights[a as usize], self.weights[b as usize], dist);
                        if (p >= bound || rng.random::<f64>() * bound < p) && (self.accept)(a, b, dist, p, rng) {
                            out.push((a, b));
                        }
                        idx += 1;
                        if idx >= total {
                            break;
                        }
                    }
                }
            }
        }
    }
}
