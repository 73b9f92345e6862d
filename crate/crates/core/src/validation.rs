//! Simulation-versus-theory suites with JSON reports.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::assortativity::{coefficient_report, pearson_assortativity};
use crate::error::{Error, Result};
use crate::generators::{
    self, calibrate_avg_degree, generate_naive, supergraph_scale, supergraph_weights, Alpha, CalibrationOptions,
    Kernel, Model, ModelParams, PositionMatrix, WeightVector,
};
use crate::rng;
use crate::stats::{chi_square_homogeneity, linear_fit, mean_sd, paired_t_test};
use crate::theory::{
    monte_carlo_intersection_fraction, predicted_pearson_scaling, rgg_conditional_degree_check,
    rgg_expected_intersection_fraction,
};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: serde_json::Value,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: serde_json::Value) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        Self {
            suite: suite.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RggSuite {
    pub dims: Vec<usize>,
    pub intersection_samples: usize,
    pub n: usize,
    pub conditional_dim: usize,
    pub mean_degree: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub replicates: usize,
    pub significance: f64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for RggSuite {
    fn default() -> Self {
        Self {
            dims: vec![1, 2, 3],
            intersection_samples: 100_000,
            n: 10_000,
            conditional_dim: 1,
            mean_degree: 10.0,
            k_min: 3,
            k_max: 25,
            replicates: 50,
            significance: 0.01,
            seed: 1,
            workers: 0,
        }
    }
}

/// Intersection fraction against `(3/4)^d` within 3 standard errors, and a
/// positive slope of mean neighbour degree in `k`.
pub fn run_rgg_suite(cfg: &RggSuite) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for &d in &cfg.dims {
        let mut r = rng::stream(cfg.seed, rng::PHASE_MONTE_CARLO, 1000 + d as u64);
        let est = monte_carlo_intersection_fraction(d, cfg.intersection_samples, &mut r)?;
        let expect = rgg_expected_intersection_fraction(d);
        checks.push(Check::new(
            format!("intersection_fraction_d{d}"),
            (est.mean - expect).abs() <= 3.0 * est.stderr,
            json!({ "estimate": est, "expected": expect }),
        ));
    }
    let radius = generators::radius_for_avg_degree(cfg.n, cfg.conditional_dim, cfg.mean_degree)?;
    let rep = rgg_conditional_degree_check(
        cfg.n,
        cfg.conditional_dim,
        radius,
        cfg.k_min..=cfg.k_max,
        cfg.replicates,
        cfg.seed,
        cfg.workers,
    )?;
    let slope_ok = matches!((rep.fit, rep.slope_p_value), (Some(f), Some(p)) if f.slope > 0.0 && p < cfg.significance);
    checks.push(Check::new(
        "neighbour_degree_slope",
        slope_ok,
        json!({ "fit": rep.fit, "p_value": rep.slope_p_value }),
    ));
    let excess_ok = rep.neighbour_mean_at_mean_degree.is_some_and(|m| m > rep.mean_degree);
    checks.push(Check::new(
        "assortative_excess_at_mean_degree",
        excess_ok,
        json!({ "mean_degree": rep.mean_degree, "neighbour_mean": rep.neighbour_mean_at_mean_degree }),
    ));
    let judged: Vec<bool> = rep.bins.iter().filter_map(|b| b.within_3_stderr).collect();
    let hits = judged.iter().filter(|&&x| x).count();
    checks.push(Check::new(
        "conditional_mean_matches_decomposition",
        !judged.is_empty() && hits as f64 >= 0.9 * judged.len() as f64,
        json!({ "bins_within_3_stderr": hits, "bins_judged": judged.len(), "bins": rep.bins }),
    ));
    Ok(SuiteReport::new("rgg", checks))
}

#[derive(Debug, Clone, Serialize)]
pub struct PearsonSuite {
    pub tau: f64,
    pub sigmas: Vec<f64>,
    pub ns: Vec<usize>,
    pub replicates: usize,
    pub avg_degree: f64,
    pub slope_tolerance: f64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for PearsonSuite {
    fn default() -> Self {
        Self {
            tau: 2.2,
            sigmas: vec![0.2, 1.0, 1.6],
            ns: vec![10_000, 30_000, 100_000],
            replicates: 10,
            avg_degree: 15.0,
            slope_tolerance: 0.1,
            seed: 1,
            workers: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PearsonCell {
    pub sigma: f64,
    pub n: usize,
    pub values: Vec<Option<f64>>,
    pub realized_avg_degrees: Vec<f64>,
    pub mean_abs: f64,
}

/// Tunable Chung-Lu graphs: Pearson negative in every replicate, and the slope
/// of `ln mean|r|` against `ln n` close to `-(τ-2)/(τ-1)`.
///
/// `σ >= τ - 1` is admitted here since it is part of the tested grid.
pub fn run_pearson_suite(cfg: &PearsonSuite) -> Result<(SuiteReport, Vec<PearsonCell>)> {
    let predicted = predicted_pearson_scaling(cfg.tau);
    let mut cells = Vec::new();
    let mut checks = Vec::new();
    for &sigma in &cfg.sigmas {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &n in &cfg.ns {
            let mut values = Vec::new();
            let mut avgs = Vec::new();
            for rep in 0..cfg.replicates {
                let params = ModelParams::new(Model::TunableChungLu, n)
                    .tau(cfg.tau)
                    .sigma(sigma)
                    .avg_degree(cfg.avg_degree)
                    .allow_non_power_law(true)
                    .seed(rng::derive(cfg.seed, rep as u64));
                let cal = calibrate_avg_degree(
                    &params,
                    &CalibrationOptions {
                        workers: cfg.workers,
                        ..Default::default()
                    },
                )?;
                values.push(pearson_assortativity(&cal.instance.graph)?);
                avgs.push(cal.realized_avg);
            }
            let defined: Vec<f64> = values.iter().flatten().map(|r| r.abs()).collect();
            let mean_abs = mean_sd(&defined).0;
            xs.push((n as f64).ln());
            ys.push(mean_abs.ln());
            let all_negative = values.iter().all(|r| r.is_some_and(|r| r < 0.0));
            checks.push(Check::new(
                format!("negative_sigma{sigma}_n{n}"),
                all_negative,
                json!({ "values": values }),
            ));
            cells.push(PearsonCell {
                sigma,
                n,
                values,
                realized_avg_degrees: avgs,
                mean_abs,
            });
        }
        let fit = linear_fit(&xs, &ys).ok();
        let ok = fit.is_some_and(|f| (f.slope - predicted.exponent).abs() <= cfg.slope_tolerance);
        checks.push(Check::new(
            format!("scaling_sigma{sigma}"),
            ok,
            json!({ "fit": fit, "predicted_exponent": predicted.exponent }),
        ));
    }
    Ok((SuiteReport::new("pearson-negativity", checks), cells))
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceSuite {
    pub n: usize,
    pub tau: f64,
    pub sigmas: Vec<f64>,
    pub alphas: Vec<Alpha>,
    pub dim: usize,
    pub avg_degree: f64,
    pub replicates: usize,
    pub significance: f64,
    pub domination_n: usize,
    pub seed: u64,
    pub workers: usize,
}

impl Default for EquivalenceSuite {
    fn default() -> Self {
        Self {
            n: 2000,
            tau: 2.8,
            sigmas: vec![0.2, 1.0, 1.6],
            alphas: vec![Alpha::Infinite, Alpha::Finite(1.43)],
            dim: 2,
            avg_degree: 15.0,
            replicates: 50,
            significance: 0.01,
            domination_n: 500,
            seed: 1,
            workers: 0,
        }
    }
}

/// Pairs where the supergraph probability falls below the target probability.
pub fn supergraph_domination_violations(
    weights: &WeightVector,
    positions: &PositionMatrix,
    sigma: f64,
    alpha: Alpha,
    scale: f64,
) -> usize {
    let dim = positions.dim;
    let sup = supergraph_weights(weights, sigma);
    let target = Kernel::geometric(sigma, alpha, dim, scale, weights.total);
    let dominating = Kernel::geometric(1.0, alpha, dim, supergraph_scale(sigma, scale, dim), sup.total);
    let n = weights.len();
    (0..n)
        .into_par_iter()
        .map(|u| {
            (u + 1..n)
                .filter(|&v| {
                    let d = crate::generators::torus_distance(positions.point(u), positions.point(v))
                        .expect("same dimension");
                    let p = target.prob(weights.weights[u], weights.weights[v], d);
                    let q = dominating.prob(sup.weights[u], sup.weights[v], d);
                    q < p * (1.0 - 1e-12)
                })
                .count()
        })
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceCell {
    pub sigma: f64,
    pub alpha: Alpha,
    pub scale: f64,
    pub realized_avg_degree: f64,
    pub degree_test_p: f64,
    pub edge_count_test_p: f64,
    pub mean_edges_fast: f64,
    pub mean_edges_naive: f64,
    pub domination_violations: usize,
}

/// Fast versus naive TGIRG sampler on identical latent variables.
///
/// Per replicate both samplers see the same weights and positions but draw
/// their edges independently. Degree histograms pooled over replicates are
/// compared with a chi-square homogeneity test, edge counts with a paired
/// t-test.
pub fn run_equivalence_suite(cfg: &EquivalenceSuite) -> Result<(SuiteReport, Vec<EquivalenceCell>)> {
    let mut checks = Vec::new();
    let mut cells = Vec::new();
    for &sigma in &cfg.sigmas {
        for &alpha in &cfg.alphas {
            let base = ModelParams::new(Model::Tgirg, cfg.n)
                .tau(cfg.tau)
                .sigma(sigma)
                .alpha(alpha)
                .dim(cfg.dim)
                .avg_degree(cfg.avg_degree)
                .seed(cfg.seed);
            let cal = calibrate_avg_degree(
                &base,
                &CalibrationOptions {
                    workers: cfg.workers,
                    ..Default::default()
                },
            )?;
            let scale = cal.scale;
            let runs: Vec<Result<(Vec<u32>, Vec<u32>)>> = rng::with_workers(cfg.workers, || {
                (0..cfg.replicates)
                    .into_par_iter()
                    .map(|rep| {
                        let params = base.clone().seed(rng::derive(cfg.seed, 1 + rep as u64));
                        let fast = generators::generate(&params, scale, 0)?;
                        let mut r = rng::stream(params.seed, rng::PHASE_NAIVE, 0);
                        let naive =
                            generate_naive(&params, fast.weights.as_ref(), fast.positions.as_ref(), scale, &mut r)?;
                        Ok((fast.graph.degrees(), naive.degrees()))
                    })
                    .collect()
            });
            let mut hist_fast = Vec::new();
            let mut hist_naive = Vec::new();
            let mut edges_fast = Vec::new();
            let mut edges_naive = Vec::new();
            let add = |h: &mut Vec<u64>, degs: &[u32]| {
                for &d in degs {
                    let d = d as usize;
                    if h.len() <= d {
                        h.resize(d + 1, 0);
                    }
                    h[d] += 1;
                }
            };
            for run in runs {
                let (f, nv) = run?;
                add(&mut hist_fast, &f);
                add(&mut hist_naive, &nv);
                edges_fast.push(f.iter().map(|&d| d as f64).sum::<f64>() / 2.0);
                edges_naive.push(nv.iter().map(|&d| d as f64).sum::<f64>() / 2.0);
            }
            let deg_test = chi_square_homogeneity(&hist_fast, &hist_naive)?;
            let edge_test = paired_t_test(&edges_fast, &edges_naive)?;

            let dn = cfg.domination_n.min(cfg.n);
            let small = base.clone().seed(rng::derive(cfg.seed, 0xD0));
            let mut small_params = small.clone();
            small_params.n = dn;
            let w = generators::latent_weights(&small_params)?;
            let pos = generators::latent_positions(&small_params);
            let violations = supergraph_domination_violations(&w, &pos, sigma, alpha, scale);

            let label = format!("sigma{sigma}_T{}", alpha.temperature());
            checks.push(Check::new(
                format!("degree_distribution_{label}"),
                deg_test.p_value >= cfg.significance,
                json!(deg_test),
            ));
            checks.push(Check::new(
                format!("edge_count_{label}"),
                edge_test.p_value >= cfg.significance,
                json!(edge_test),
            ));
            checks.push(Check::new(
                format!("supergraph_domination_{label}"),
                violations == 0,
                json!({ "n": dn, "violations": violations }),
            ));
            checks.push(Check::new(
                format!("calibration_{label}"),
                (cal.realized_avg - cfg.avg_degree).abs() <= 0.1 * cfg.avg_degree,
                json!({ "scale": scale, "realized_avg": cal.realized_avg }),
            ));
            cells.push(EquivalenceCell {
                sigma,
                alpha,
                scale,
                realized_avg_degree: cal.realized_avg,
                degree_test_p: deg_test.p_value,
                edge_count_test_p: edge_test.p_value,
                mean_edges_fast: mean_sd(&edges_fast).0,
                mean_edges_naive: mean_sd(&edges_naive).0,
                domination_violations: violations,
            });
        }
    }
    Ok((SuiteReport::new("sampler-equivalence", checks), cells))
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub models: Vec<Model>,
    pub taus: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub n: usize,
    pub replicates: usize,
    pub avg_degree: f64,
    pub alpha: Alpha,
    pub dim: usize,
    /// Also run cells with `σ >= τ - 1`.
    pub allow_non_power_law: bool,
    pub seed: u64,
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            models: vec![Model::TunableChungLu, Model::Tgirg],
            taus: vec![2.2, 2.4, 2.6, 2.8],
            sigmas: (1..=9).map(|i| i as f64 / 5.0).collect(),
            n: 50_000,
            replicates: 5,
            avg_degree: 15.0,
            alpha: Alpha::Infinite,
            dim: 2,
            allow_non_power_law: false,
            seed: 1,
            workers: 0,
        }
    }
}

/// Mean and standard deviation of a coefficient over the replicates where it
/// is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub defined: usize,
}

impl Summary {
    fn of(values: &[Option<f64>]) -> Self {
        let xs: Vec<f64> = values.iter().flatten().copied().collect();
        let (mean, sd) = mean_sd(&xs);
        Summary {
            mean: (!xs.is_empty()).then_some(mean),
            sd: (!xs.is_empty()).then_some(sd),
            defined: xs.len(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepCell {
    pub model: Model,
    pub tau: f64,
    pub sigma: f64,
    pub replicates: usize,
    pub pearson: Summary,
    pub spearman: Summary,
    pub kendall: Summary,
    pub spearman_values: Vec<Option<f64>>,
    pub kendall_values: Vec<Option<f64>>,
    pub realized_avg_degrees: Vec<f64>,
}

/// Coefficients over a `(model, τ, σ)` grid, each cell averaged over
/// calibrated replicates. Cells with `σ >= τ - 1` are skipped unless allowed.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepCell>> {
    let mut cells = Vec::new();
    for &model in &cfg.models {
        for &tau in &cfg.taus {
            for &sigma in &cfg.sigmas {
                let sigma_eff = if model.is_tunable() { sigma } else { 1.0 };
                if sigma_eff >= tau - 1.0 && !cfg.allow_non_power_law {
                    continue;
                }
                let mut pearson = Vec::new();
                let mut spearman = Vec::new();
                let mut kendall = Vec::new();
                let mut avgs = Vec::new();
                for rep in 0..cfg.replicates {
                    let params = ModelParams::new(model, cfg.n)
                        .tau(tau)
                        .sigma(sigma)
                        .alpha(cfg.alpha)
                        .dim(if model.is_geometric() { cfg.dim } else { 1 })
                        .avg_degree(cfg.avg_degree)
                        .allow_non_power_law(cfg.allow_non_power_law)
                        .seed(rng::derive(cfg.seed, rep as u64));
                    let cal = calibrate_avg_degree(
                        &params,
                        &CalibrationOptions {
                            workers: cfg.workers,
                            ..Default::default()
                        },
                    )?;
                    let rep = coefficient_report(&cal.instance.graph)?;
                    pearson.push(rep.pearson);
                    spearman.push(rep.spearman);
                    kendall.push(rep.kendall);
                    avgs.push(cal.realized_avg);
                }
                cells.push(SweepCell {
                    model,
                    tau,
                    sigma,
                    replicates: cfg.replicates,
                    pearson: Summary::of(&pearson),
                    spearman: Summary::of(&spearman),
                    kendall: Summary::of(&kendall),
                    spearman_values: spearman,
                    kendall_values: kendall,
                    realized_avg_degrees: avgs,
                });
            }
        }
    }
    Ok(cells)
}

/// Runs a suite by name.
pub fn run_suite_by_name(
    name: &str,
    dims: Option<Vec<usize>>,
    tau: Option<f64>,
    n: Option<usize>,
    seed: u64,
    workers: usize,
) -> Result<SuiteReport> {
    match name {
        "rgg" => {
            let mut cfg = RggSuite {
                seed,
                workers,
                ..Default::default()
            };
            if let Some(d) = dims {
                cfg.dims = d;
            }
            if let Some(n) = n {
                cfg.n = n;
            }
            run_rgg_suite(&cfg)
        }
        "pearson-negativity" => {
            let mut cfg = PearsonSuite {
                seed,
                workers,
                ..Default::default()
            };
            if let Some(t) = tau {
                cfg.tau = t;
            }
            if let Some(n) = n {
                cfg.ns = vec![n / 10, n * 3 / 10, n];
            }
            Ok(run_pearson_suite(&cfg)?.0)
        }
        "sampler-equivalence" => {
            let mut cfg = EquivalenceSuite {
                seed,
                workers,
                ..Default::default()
            };
            if let Some(t) = tau {
                cfg.tau = t;
            }
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(d) = dims.and_then(|d| d.first().copied()) {
                cfg.dim = d;
            }
            Ok(run_equivalence_suite(&cfg)?.0)
        }
        other => Err(Error::param(format!(
            "unknown suite {other:?}; expected rgg, pearson-negativity or sampler-equivalence"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domination_holds_exhaustively_on_small_instances() {
        for sigma in [0.0, 0.2, 0.7, 1.0, 1.6, 2.5] {
            for alpha in [Alpha::Infinite, Alpha::Finite(1.43)] {
                for scale in [0.05, 1.0, 4.0] {
                    let mut r = rng::stream(9, 0, 0);
                    let w = generators::sample_weights(300, 2.8, &mut r).unwrap();
                    let pos = generators::sample_positions(300, 2, &mut r);
                    assert_eq!(supergraph_domination_violations(&w, &pos, sigma, alpha, scale), 0);
                }
            }
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite_by_name("nope", None, None, None, 0, 0).is_err());
    }
}
