use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Per-vertex weights `w_v >= 1` (or positive, after supergraph rescaling).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    pub weights: Vec<f64>,
    pub total: f64,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Self {
        let total = weights.iter().sum();
        Self { weights, total }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.weights.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Inverse CDF of the Pareto law with density `(τ-1) w^{-τ}` on `[1, ∞)`.
pub fn pareto_inverse_cdf(u: f64, tau: f64) -> f64 {
    (1.0 - u).powf(-1.0 / (tau - 1.0))
}

/// `n` i.i.d. power-law weights with exponent `tau`.
pub fn sample_weights<R: Rng + ?Sized>(n: usize, tau: f64, rng: &mut R) -> Result<WeightVector> {
    if !(tau > 2.0) {
        return Err(Error::param(format!("tau must exceed 2, got {tau}")));
    }
    let weights = (0..n).map(|_| pareto_inverse_cdf(rng.random::<f64>(), tau)).collect();
    Ok(WeightVector::new(weights))
}

/// Weights of a classical GIRG whose edge probabilities dominate those of the
/// tunable model with exponent `sigma` on `weights`.
///
/// For `σ < 1` every weight is scaled by `w_min^{σ-1}`. For `σ > 1` the
/// auxiliary weights `w'' = w * min{W^{1/(σ+1)}, w}^{(σ-1)/2}` are rescaled by
/// `W''/W`, which keeps the expected supergraph size linear.
pub fn supergraph_weights(weights: &WeightVector, sigma: f64) -> WeightVector {
    if sigma == 1.0 || weights.is_empty() {
        return weights.clone();
    }
    if sigma < 1.0 {
        let factor = weights.min().powf(sigma - 1.0);
        return WeightVector::new(weights.weights.iter().map(|w| w * factor).collect());
    }
    let cap = weights.total.powf(1.0 / (sigma + 1.0));
    let half = (sigma - 1.0) / 2.0;
    let aux: Vec<f64> = weights.weights.iter().map(|&w| w * cap.min(w).powf(half)).collect();
    let aux_total: f64 = aux.iter().sum();
    let factor = aux_total / weights.total;
    WeightVector::new(aux.into_iter().map(|w| w * factor).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_cdf_values() {
        assert_eq!(pareto_inverse_cdf(0.0, 2.8), 1.0);
        assert!((pareto_inverse_cdf(0.75, 3.0) - 2.0).abs() < 1e-12);
        // 100^(2/3)
        assert!((pareto_inverse_cdf(0.99, 2.5) - 21.544_346_900_318_84).abs() < 1e-9);
    }

    #[test]
    fn tau_must_exceed_two() {
        let mut rng = crate::rng::stream(0, 0, 0);
        assert!(sample_weights(10, 2.0, &mut rng).is_err());
        let w = sample_weights(1000, 2.5, &mut rng).unwrap();
        assert!(w.weights.iter().all(|&x| x >= 1.0));
        assert!((w.total - w.weights.iter().sum::<f64>()).abs() < 1e-9);
    }

    #[test]
    fn supergraph_identity_at_sigma_one() {
        let w = WeightVector::new(vec![1.0, 3.0, 7.5]);
        assert_eq!(supergraph_weights(&w, 1.0), w);
    }

    #[test]
    fn supergraph_below_one() {
        let w = supergraph_weights(&WeightVector::new(vec![4.0, 9.0]), 0.5);
        assert_eq!(w.weights, vec![2.0, 4.5]);
    }

    #[test]
    fn supergraph_above_one() {
        let w = WeightVector::new(vec![1.0, 1.0, 2.0]);
        let s = supergraph_weights(&w, 3.0);
        let aux_total = 2.0 + 2.0 * 2f64.sqrt();
        let expect = [aux_total / 4.0, aux_total / 4.0, 2.0 * 2f64.sqrt() * aux_total / 4.0];
        for (a, b) in s.weights.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!((s.weights[0] - 1.207).abs() < 1e-3);
        assert!((s.weights[2] - 3.414).abs() < 1e-3);
        // domination for the (2,1) and (1,1) pairs
        let lhs = |a: usize, b: usize| s.weights[a] * s.weights[b] / s.total;
        assert!(lhs(2, 0) >= 2.0 * 1.0 / 4.0);
        assert!((lhs(2, 0) - 0.707).abs() < 1e-3);
        assert!(lhs(0, 1) >= 0.25 - 1e-12);
    }
}
