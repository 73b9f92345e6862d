//! Closed-form predictors and Monte Carlo oracles.
//!
//! The predictors return shapes "up to a constant": only the regime and the
//! exponents are meaningful.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{self, Kernel, Model, ModelParams};
use crate::graph::Vertex;
use crate::rng::{self, StreamRng};
use crate::stats::{linear_fit, mean_sd, LinearFit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Below the cutoff `n`.
    Sub,
    /// Joint mass above `n`, conditioning weight below it.
    Saturated,
    /// Conditioning weight above `n`.
    Beyond,
}

/// One piece of a piecewise power law in `w`: `density ∝ w^exponent` locally,
/// with `log_shape` the logarithm of the shape at the queried point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawPiece {
    pub regime: Regime,
    pub exponent: f64,
    pub log_shape: f64,
}

/// Density of the weight of a uniformly random edge endpoint:
/// `w^{1-τ}` up to `n`, `n w^{-τ}` beyond. The same for every σ.
pub fn predicted_edge_endpoint_tail(w: f64, tau: f64, n: f64) -> PowerLawPiece {
    if w <= n {
        PowerLawPiece {
            regime: Regime::Sub,
            exponent: 1.0 - tau,
            log_shape: (1.0 - tau) * w.ln(),
        }
    } else {
        PowerLawPiece {
            regime: Regime::Beyond,
            exponent: -tau,
            log_shape: n.ln() - tau * w.ln(),
        }
    }
}

/// Density of the weight `w` of a neighbour of a vertex of weight `w_u`.
///
/// Sub-cutoff it is `w^{1-τ} (w ∧ w_u)^{σ-1}`, so for `σ = 1` it does not
/// depend on `w_u`.
pub fn predicted_conditional_weight_density(w: f64, w_u: f64, tau: f64, sigma: f64, n: f64) -> PowerLawPiece {
    let lo = w.min(w_u);
    let mass = lo.powf(sigma) * w.max(w_u);
    if w_u > n {
        PowerLawPiece {
            regime: Regime::Beyond,
            exponent: -tau,
            log_shape: -tau * w.ln(),
        }
    } else if mass <= n {
        let exponent = if w <= w_u { 1.0 - tau + sigma - 1.0 } else { 1.0 - tau };
        PowerLawPiece {
            regime: Regime::Sub,
            exponent,
            log_shape: (1.0 - tau) * w.ln() + (sigma - 1.0) * lo.ln(),
        }
    } else {
        PowerLawPiece {
            regime: Regime::Saturated,
            exponent: -tau,
            log_shape: -tau * w.ln() + n.ln() - w_u.ln(),
        }
    }
}

/// Joint density of the two endpoint weights of a random edge.
pub fn predicted_joint_weight_density(w_u: f64, w_v: f64, tau: f64, sigma: f64, n: f64) -> PowerLawPiece {
    let (lo, hi) = (w_u.min(w_v), w_u.max(w_v));
    if lo.powf(sigma) * hi <= n {
        PowerLawPiece {
            regime: Regime::Sub,
            exponent: sigma - tau,
            log_shape: (sigma - tau) * lo.ln() + (1.0 - tau) * hi.ln(),
        }
    } else {
        PowerLawPiece {
            regime: Regime::Saturated,
            exponent: -tau,
            log_shape: n.ln() - tau * (w_u.ln() + w_v.ln()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PearsonScaling {
    pub negative: bool,
    /// `r = Θ(-n^exponent)`.
    pub exponent: f64,
    /// Whether `2 < τ < 7/3`, where the scaling is proven.
    pub in_hypothesis: bool,
}

pub fn predicted_pearson_scaling(tau: f64) -> PearsonScaling {
    PearsonScaling {
        negative: true,
        exponent: -(tau - 2.0) / (tau - 1.0),
        in_hypothesis: tau > 2.0 && tau < 7.0 / 3.0,
    }
}

/// `E[Vol(B(x_u) ∩ B(x_v)) / Vol(B(x_u))]` for `x_v` uniform in `B(x_u)` under
/// the max-norm.
pub fn rgg_expected_intersection_fraction(d: usize) -> f64 {
    0.75f64.powi(d as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    fn from_samples(xs: &[f64]) -> Self {
        let (mean, sd) = mean_sd(xs);
        Estimate {
            mean,
            stderr: sd / (xs.len() as f64).sqrt(),
            samples: xs.len(),
        }
    }
}

/// Monte Carlo estimate of [`rgg_expected_intersection_fraction`].
///
/// `x_v` is drawn uniformly from the box of half-width `ρ` around `x_u`; the
/// overlap of the two boxes is `Π (2ρ - |δ_i|) / (2ρ)`, independent of `ρ`.
pub fn monte_carlo_intersection_fraction<R: Rng + ?Sized>(d: usize, samples: usize, rng: &mut R) -> Result<Estimate> {
    if d == 0 {
        return Err(Error::param("dimension must be at least 1"));
    }
    if samples < 1000 {
        return Err(Error::param(format!("at least 1000 samples needed, got {samples}")));
    }
    let xs: Vec<f64> = (0..samples)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let delta: f64 = rng.random_range(-1.0..1.0);
                    (2.0 - delta.abs()) / 2.0
                })
                .product()
        })
        .collect();
    Ok(Estimate::from_samples(&xs))
}

/// Decomposition `deg(v) = 1 + Po(shared) + Po(outside)` of the degree of a
/// random neighbour `v` of a vertex `u` of degree `k`, in expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RggDegreeLaw {
    pub base: f64,
    /// The `k - 1` other neighbours of `u` that also fall in `v`'s box.
    pub poisson_mean_shared: f64,
    /// Non-neighbours of `u` in the part of `v`'s box outside `u`'s.
    pub poisson_mean_outside: f64,
}

impl RggDegreeLaw {
    /// Connection radius `r`, boxes of volume `(2r)^d`. Non-neighbours of `u`
    /// are uniform on the complement of its box.
    pub fn new(n: usize, d: usize, r: f64, k: usize) -> Self {
        let q = rgg_expected_intersection_fraction(d);
        let vol = (2.0 * r).powi(d as i32);
        let others = n.saturating_sub(1 + k) as f64;
        RggDegreeLaw {
            base: 1.0,
            poisson_mean_shared: k.saturating_sub(1) as f64 * q,
            poisson_mean_outside: if others > 0.0 {
                others * vol * (1.0 - q) / (1.0 - vol)
            } else {
                0.0
            },
        }
    }

    pub fn mean(&self) -> f64 {
        self.base + self.poisson_mean_shared + self.poisson_mean_outside
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeBin {
    pub k: usize,
    pub samples: usize,
    pub mean: f64,
    pub stderr: f64,
    pub predicted: f64,
    /// `None` when there are too few samples to judge.
    pub within_3_stderr: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RggConditionalReport {
    pub n: usize,
    pub dim: usize,
    pub radius: f64,
    pub replicates: usize,
    pub bins: Vec<DegreeBin>,
    pub fit: Option<LinearFit>,
    /// One-sided p-value for a positive slope of mean neighbour degree in `k`.
    pub slope_p_value: Option<f64>,
    pub mean_degree: f64,
    /// Mean neighbour degree at `k = round(mean degree)`.
    pub neighbour_mean_at_mean_degree: Option<f64>,
}

pub const MIN_BIN_SAMPLES: usize = 30;

/// Simulates RGGs and compares the mean degree of a random neighbour of a
/// degree-`k` vertex with [`RggDegreeLaw`] for every `k` in `ks`.
///
/// For every vertex `u` with a degree in `ks`, one neighbour is drawn
/// uniformly. Replicates run in parallel on their own streams.
pub fn rgg_conditional_degree_check(
    n: usize,
    d: usize,
    r: f64,
    ks: std::ops::RangeInclusive<usize>,
    replicates: usize,
    seed: u64,
    workers: usize,
) -> Result<RggConditionalReport> {
    let kmax = *ks.end();
    let per_rep: Vec<Result<(Vec<Vec<f64>>, f64)>> = rng::with_workers(workers, || {
        (0..replicates)
            .into_par_iter()
            .map(|rep| {
                let mut rng = rng::stream(seed, rng::PHASE_MONTE_CARLO, rep as u64);
                let g = generators::generate_rgg(n, d, r, &mut rng)?;
                let mut by_k = vec![Vec::new(); kmax + 1];
                for u in 0..g.vertex_count() as Vertex {
                    let k = g.degree(u);
                    if ks.contains(&k) {
                        let nb = g.neighbors(u);
                        let v = nb[rng.random_range(0..nb.len())];
                        by_k[k].push(g.degree(v) as f64);
                    }
                }
                Ok((by_k, g.average_degree()))
            })
            .collect()
    });
    let mut pooled = vec![Vec::new(); kmax + 1];
    let mut avg_sum = 0.0;
    for rep in per_rep {
        let (by_k, avg) = rep?;
        avg_sum += avg;
        for (k, xs) in by_k.into_iter().enumerate() {
            pooled[k].extend(xs);
        }
    }
    let mean_degree = avg_sum / replicates.max(1) as f64;

    let mut bins = Vec::new();
    for k in ks.clone() {
        let xs = &pooled[k];
        if xs.is_empty() {
            continue;
        }
        let est = Estimate::from_samples(xs);
        let predicted = RggDegreeLaw::new(n, d, r, k).mean();
        let judged = xs.len() >= MIN_BIN_SAMPLES && est.stderr > 0.0;
        bins.push(DegreeBin {
            k,
            samples: xs.len(),
            mean: est.mean,
            stderr: est.stderr,
            predicted,
            within_3_stderr: judged.then(|| (est.mean - predicted).abs() <= 3.0 * est.stderr),
        });
    }
    let usable: Vec<&DegreeBin> = bins.iter().filter(|b| b.samples >= 2).collect();
    let xs: Vec<f64> = usable.iter().map(|b| b.k as f64).collect();
    let ys: Vec<f64> = usable.iter().map(|b| b.mean).collect();
    let fit = linear_fit(&xs, &ys).ok();
    let k_mean = mean_degree.round() as usize;
    Ok(RggConditionalReport {
        n,
        dim: d,
        radius: r,
        replicates,
        slope_p_value: fit.map(|f| f.p_value_positive()),
        fit,
        neighbour_mean_at_mean_degree: bins.iter().find(|b| b.k == k_mean).map(|b| b.mean),
        mean_degree,
        bins,
    })
}

/// Monte Carlo estimate of the expected degree of a vertex of weight `w`.
///
/// The vertex is planted at the origin; partners are drawn uniformly from the
/// latent weights of `params` and get uniform positions, so the estimate is
/// conditional on the realized weights (fresh Pareto partners would not match
/// the realized total `W` under heavy tails). Edge probabilities are averaged
/// (same expectation as the indicators, less noise) and scaled by `n - 1`.
pub fn monte_carlo_expected_degree(
    params: &ModelParams,
    w: f64,
    scale: f64,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    params.validate()?;
    if params.model == Model::Rgg {
        return Err(Error::param("rgg has no vertex weights"));
    }
    if !(w >= 1.0) || samples < 2 {
        return Err(Error::param("need w >= 1 and at least two samples"));
    }
    let latent = generators::latent_weights(params)?;
    let total = latent.total;
    let kernel: Kernel = if params.model.is_geometric() {
        Kernel::geometric(params.effective_sigma(), params.alpha, params.dim, scale, total)
    } else {
        Kernel::plain(params.effective_sigma(), scale, total)
    };
    let mut rng: StreamRng = rng::stream(seed, rng::PHASE_MONTE_CARLO, 0);
    let geometric = params.model.is_geometric();
    let xs: Vec<f64> = (0..samples)
        .map(|_| {
            let wv = latent.weights[rng.random_range(0..latent.len())];
            let dist = if geometric {
                (0..params.dim)
                    .map(|_| {
                        let x: f64 = rng.random();
                        x.min(1.0 - x)
                    })
                    .fold(0.0, f64::max)
            } else {
                0.0
            };
            kernel.prob(w, wv, dist) * (params.n - 1) as f64
        })
        .collect();
    Ok(Estimate::from_samples(&xs))
}

/// Least-squares slope of `ln y` against `ln x` over points with
/// `lo <= x <= hi` and `y > 0`.
pub fn loglog_slope(curve: &[(f64, f64)], lo: f64, hi: f64) -> Result<LinearFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = curve
        .iter()
        .filter(|&&(x, y)| x >= lo && x <= hi && x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .unzip();
    if xs.len() < 5 {
        return Err(Error::Insufficient(format!(
            "{} points in [{lo}, {hi}]; a slope needs at least 5",
            xs.len()
        )));
    }
    linear_fit(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_closed_form() {
        assert_eq!(rgg_expected_intersection_fraction(1), 0.75);
        assert_eq!(rgg_expected_intersection_fraction(2), 0.5625);
        assert_eq!(rgg_expected_intersection_fraction(3), 0.421875);
    }

    #[test]
    fn endpoint_tail_is_sigma_free() {
        let p = predicted_edge_endpoint_tail(10.0, 2.8, 1e5);
        assert_eq!(p.regime, Regime::Sub);
        assert!((p.exponent + 1.8).abs() < 1e-12);
        assert_eq!(predicted_edge_endpoint_tail(1e6, 2.8, 1e5).exponent, -2.8);
    }

    #[test]
    fn conditional_regimes() {
        let a = predicted_conditional_weight_density(5.0, 10.0, 2.8, 1.0, 1e6);
        let b = predicted_conditional_weight_density(5.0, 50.0, 2.8, 1.0, 1e6);
        assert_eq!(a.regime, Regime::Sub);
        assert!((a.log_shape - b.log_shape).abs() < 1e-12);
        let c = predicted_conditional_weight_density(5.0, 10.0, 2.8, 1.6, 1e6);
        assert!((c.exponent - (1.0 - 2.8 + 0.6)).abs() < 1e-12);
        for sigma in [0.2, 1.0, 1.6] {
            let d = predicted_conditional_weight_density(5.0, 2e6, 2.8, sigma, 1e6);
            assert_eq!((d.regime, d.exponent), (Regime::Beyond, -2.8));
        }
    }

    #[test]
    fn joint_density_plug_in() {
        let p = predicted_joint_weight_density(2.0, 8.0, 2.8, 1.6, 1e9);
        let expect = 2f64.powf(-1.2) * 8f64.powf(-1.8);
        assert!((p.log_shape.exp() - expect).abs() < 1e-12);
        let q = predicted_joint_weight_density(8.0, 2.0, 2.8, 1.6, 1e9);
        assert_eq!(p, q);
        let r = predicted_joint_weight_density(3.0, 7.0, 2.8, 1.0, 1e9);
        assert!((r.log_shape - (-1.8 * 3f64.ln() - 1.8 * 7f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn pearson_exponent() {
        let s = predicted_pearson_scaling(2.2);
        assert!((s.exponent + 1.0 / 6.0).abs() < 1e-12);
        assert!(s.in_hypothesis && s.negative);
        assert!(!predicted_pearson_scaling(7.0 / 3.0).in_hypothesis);
        assert!(predicted_pearson_scaling(2.0 + 1e-9).exponent > -1e-8);
    }

    #[test]
    fn exact_power_law_slope() {
        let curve: Vec<(f64, f64)> = (1..50).map(|x| (x as f64, (x as f64).powf(-1.8))).collect();
        let f = loglog_slope(&curve, 1.0, 100.0).unwrap();
        assert!((f.slope + 1.8).abs() < 1e-9);
        assert!(loglog_slope(&curve, 1.0, 4.0).is_err());
    }

    #[test]
    fn rgg_law_n2() {
        // a lone edge: the neighbour has degree exactly 1
        let law = RggDegreeLaw::new(2, 1, 0.5, 1);
        assert_eq!(law.mean(), 1.0);
    }
}
