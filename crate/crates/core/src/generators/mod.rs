//! Random graph models: Chung-Lu, RGG, GIRG and their tunable variants.
//!
//! All models share the kernel
//! `min{ c * (w_u ∧ w_v)^σ (w_u ∨ w_v) / (W * dist^d), 1 }^α`
//! where `W` is the total weight and `c` a global scale fitted by
//! [`calibrate_avg_degree`]. The non-geometric models drop `dist^d` and `α`;
//! `σ = 1` gives the classical models back.

mod calibrate;
mod chung_lu;
mod geometry;
mod girg;
mod kernel;
mod naive;
mod rgg;
mod tgirg;
mod weights;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng;

pub use calibrate::{calibrate_avg_degree, Calibration, CalibrationOptions};
pub use chung_lu::sample_chung_lu_edges;
pub use geometry::{sample_positions, torus_distance, PositionMatrix};
pub use girg::{sample_girg_edges, MAX_DIM};
pub use kernel::{connection_probability, Kernel};
pub use naive::{generate_naive, generate_naive_with_cap, NAIVE_CAP};
pub use rgg::{generate_rgg, radius_for_avg_degree};
pub use tgirg::{generate_tgirg_fast, sample_tgirg_edges, supergraph_scale};
pub use weights::{pareto_inverse_cdf, sample_weights, supergraph_weights, WeightVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    ChungLu,
    TunableChungLu,
    Rgg,
    Girg,
    Tgirg,
}

impl Model {
    pub fn is_geometric(self) -> bool {
        matches!(self, Model::Rgg | Model::Girg | Model::Tgirg)
    }

    pub fn is_tunable(self) -> bool {
        matches!(self, Model::TunableChungLu | Model::Tgirg)
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::ChungLu => "chung_lu",
            Model::TunableChungLu => "tunable_chung_lu",
            Model::Rgg => "rgg",
            Model::Girg => "girg",
            Model::Tgirg => "tgirg",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "chung_lu" | "cl" => Model::ChungLu,
            "tunable_chung_lu" | "tcl" => Model::TunableChungLu,
            "rgg" => Model::Rgg,
            "girg" => Model::Girg,
            "tgirg" => Model::Tgirg,
            other => return Err(Error::param(format!("unknown model {other:?}"))),
        })
    }
}

/// Long-range exponent; `Infinite` is the zero-temperature threshold model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alpha {
    Finite(f64),
    Infinite,
}

impl Alpha {
    /// `T = 1/α`; `T = 0` means `α = ∞`.
    pub fn from_temperature(t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::param(format!("temperature must lie in [0, 1), got {t}")));
        }
        Ok(if t == 0.0 {
            Alpha::Infinite
        } else {
            Alpha::Finite(1.0 / t)
        })
    }

    pub fn temperature(self) -> f64 {
        match self {
            Alpha::Finite(a) => 1.0 / a,
            Alpha::Infinite => 0.0,
        }
    }
}

/// Full parameterisation of one generative model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub model: Model,
    pub n: usize,
    pub tau: f64,
    /// Ignored (fixed to 1) for `chung_lu` and `girg`, unused for `rgg`.
    pub sigma: f64,
    pub alpha: Alpha,
    pub dim: usize,
    pub target_avg_degree: Option<f64>,
    pub rgg_radius: Option<f64>,
    pub seed: u64,
    /// Admit `σ >= τ - 1`, where degrees are no longer power-law distributed.
    #[serde(default)]
    pub allow_non_power_law: bool,
}

impl ModelParams {
    pub fn new(model: Model, n: usize) -> Self {
        Self {
            model,
            n,
            tau: 2.8,
            sigma: 1.0,
            alpha: Alpha::Infinite,
            dim: if model.is_geometric() { 2 } else { 1 },
            target_avg_degree: if model == Model::Rgg { None } else { Some(15.0) },
            rgg_radius: None,
            seed: 0,
            allow_non_power_law: false,
        }
    }

    pub fn tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn alpha(mut self, alpha: Alpha) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn avg_degree(mut self, k: f64) -> Self {
        self.target_avg_degree = Some(k);
        self
    }

    pub fn rgg_radius(mut self, r: f64) -> Self {
        self.rgg_radius = Some(r);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn allow_non_power_law(mut self, yes: bool) -> Self {
        self.allow_non_power_law = yes;
        self
    }

    /// The σ actually used by the kernel.
    pub fn effective_sigma(&self) -> f64 {
        if self.model.is_tunable() {
            self.sigma
        } else {
            1.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.model == Model::Rgg {
            if self.dim == 0 || self.dim > MAX_DIM {
                return Err(Error::param(format!("dimension must lie in 1..={MAX_DIM}")));
            }
            match (self.rgg_radius, self.target_avg_degree) {
                (Some(r), _) if !(r > 0.0 && r <= 0.5) => {
                    return Err(Error::param(format!("rgg radius must lie in (0, 1/2], got {r}")))
                }
                (None, None) => return Err(Error::param("rgg needs a radius or a target average degree")),
                _ => {}
            }
            if let (None, Some(k)) = (self.rgg_radius, self.target_avg_degree) {
                radius_for_avg_degree(self.n, self.dim, k)?;
            }
            return Ok(());
        }
        if !(self.tau > 2.0) {
            return Err(Error::param(format!("tau must exceed 2, got {}", self.tau)));
        }
        if self.model.is_tunable() {
            if !(self.sigma >= 0.0) {
                return Err(Error::param(format!("sigma must be non-negative, got {}", self.sigma)));
            }
            if self.sigma >= self.tau - 1.0 && !self.allow_non_power_law {
                return Err(Error::param(format!(
                    "sigma must be below tau - 1 = {} (got sigma = {}); degrees are not power-law otherwise",
                    self.tau - 1.0,
                    self.sigma
                )));
            }
        }
        if self.model.is_geometric() {
            if self.dim == 0 || self.dim > MAX_DIM {
                return Err(Error::param(format!("dimension must lie in 1..={MAX_DIM}")));
            }
            if let Alpha::Finite(a) = self.alpha {
                if !(a > 1.0) {
                    return Err(Error::param(format!("alpha must exceed 1, got {a}")));
                }
            }
        }
        if let Some(k) = self.target_avg_degree {
            if !(k > 0.0) {
                return Err(Error::param(format!("target average degree must be positive, got {k}")));
            }
            if self.n > 0 && k >= (self.n - 1) as f64 {
                return Err(Error::param(format!(
                    "target average degree {k} is unattainable with n = {}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn kernel(&self, total_weight: f64, scale: f64) -> Kernel {
        match self.model {
            Model::Rgg => Kernel::rgg(self.dim, self.radius().unwrap_or(0.0)),
            m if m.is_geometric() => {
                Kernel::geometric(self.effective_sigma(), self.alpha, self.dim, scale, total_weight)
            }
            _ => Kernel::plain(self.effective_sigma(), scale, total_weight),
        }
    }

    /// Connection radius for RGGs, from the explicit radius or the target degree.
    pub fn radius(&self) -> Result<f64> {
        match (self.rgg_radius, self.target_avg_degree) {
            (Some(r), _) => Ok(r),
            (None, Some(k)) => radius_for_avg_degree(self.n, self.dim, k),
            (None, None) => Err(Error::param("rgg needs a radius or a target average degree")),
        }
    }
}

/// A generated graph with the latent variables that produced it.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub weights: Option<WeightVector>,
    pub positions: Option<PositionMatrix>,
    pub scale: f64,
}

/// Draws the latent weights of `params` from their dedicated stream.
pub fn latent_weights(params: &ModelParams) -> Result<WeightVector> {
    sample_weights(
        params.n,
        params.tau,
        &mut rng::stream(params.seed, rng::PHASE_WEIGHTS, 0),
    )
}

/// Draws the latent positions of `params` from their dedicated stream.
pub fn latent_positions(params: &ModelParams) -> PositionMatrix {
    sample_positions(
        params.n,
        params.dim,
        &mut rng::stream(params.seed, rng::PHASE_POSITIONS, 0),
    )
}

/// Generates one instance with the fast sampler of the model.
///
/// The output depends only on `(params, scale)`; `workers` sets the thread
/// count (0 = default pool) without affecting the result.
pub fn generate(params: &ModelParams, scale: f64, workers: usize) -> Result<Instance> {
    params.validate()?;
    if !(scale > 0.0) {
        return Err(Error::param(format!("scale must be positive, got {scale}")));
    }
    let seed = params.seed;
    match params.model {
        Model::Rgg => {
            let positions = latent_positions(params);
            let r = params.radius()?;
            let edges = rgg::rgg_edges(&positions, r, seed, workers);
            Ok(Instance {
                graph: Graph::from_simple_edges(params.n, edges),
                weights: None,
                positions: Some(positions),
                scale: 1.0,
            })
        }
        Model::ChungLu | Model::TunableChungLu => {
            let weights = latent_weights(params)?;
            let edges = sample_chung_lu_edges(&weights, params.effective_sigma(), scale, seed, workers);
            Ok(Instance {
                graph: Graph::from_simple_edges(params.n, edges),
                weights: Some(weights),
                positions: None,
                scale,
            })
        }
        Model::Girg | Model::Tgirg => {
            let weights = latent_weights(params)?;
            let positions = latent_positions(params);
            let edges = sample_tgirg_edges(
                &weights,
                &positions,
                params.effective_sigma(),
                params.alpha,
                scale,
                seed,
                workers,
            )?;
            Ok(Instance {
                graph: Graph::from_simple_edges(params.n, edges),
                weights: Some(weights),
                positions: Some(positions),
                scale,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_must_stay_below_tau_minus_one() {
        let p = ModelParams::new(Model::Tgirg, 100).tau(2.8).sigma(2.0);
        assert!(matches!(p.validate(), Err(Error::Parameter(_))));
        assert!(p.clone().allow_non_power_law(true).validate().is_ok());
        assert!(ModelParams::new(Model::Tgirg, 100).sigma(1.79).validate().is_ok());
    }

    #[test]
    fn classical_models_ignore_sigma() {
        let p = ModelParams::new(Model::ChungLu, 100).sigma(5.0);
        assert!(p.validate().is_ok());
        assert_eq!(p.effective_sigma(), 1.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModelParams::new(Model::ChungLu, 100).tau(2.0).validate().is_err());
        assert!(ModelParams::new(Model::Girg, 100)
            .alpha(Alpha::Finite(1.0))
            .validate()
            .is_err());
        assert!(ModelParams::new(Model::Girg, 100).dim(0).validate().is_err());
        assert!(ModelParams::new(Model::ChungLu, 10).avg_degree(9.0).validate().is_err());
        assert!(ModelParams::new(Model::Rgg, 10).rgg_radius(0.6).validate().is_err());
        assert!(ModelParams::new(Model::Rgg, 10).validate().is_err());
    }

    #[test]
    fn temperature_round_trip() {
        assert_eq!(Alpha::from_temperature(0.0).unwrap(), Alpha::Infinite);
        let a = Alpha::from_temperature(0.7).unwrap();
        assert!((a.temperature() - 0.7).abs() < 1e-12);
        assert!(Alpha::from_temperature(1.0).is_err());
    }

    #[test]
    fn model_names_parse() {
        for m in [
            Model::ChungLu,
            Model::TunableChungLu,
            Model::Rgg,
            Model::Girg,
            Model::Tgirg,
        ] {
            assert_eq!(m.name().parse::<Model>().unwrap(), m);
        }
        assert!("hrg".parse::<Model>().is_err());
    }
}
