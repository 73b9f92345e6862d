use super::{Alpha, ModelParams};

/// Connection kernel of one model instance.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    sigma: f64,
    alpha: Alpha,
    dim: i32,
    scale: f64,
    total: f64,
    shape: Shape,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Plain,
    Geometric,
    /// Pure threshold on distance, no weights.
    Rgg(f64),
}

impl Kernel {
    /// `min{c (w_u ∧ w_v)^σ (w_u ∨ w_v) / W, 1}`.
    pub fn plain(sigma: f64, scale: f64, total: f64) -> Self {
        Self {
            sigma,
            alpha: Alpha::Finite(1.0),
            dim: 0,
            scale,
            total,
            shape: Shape::Plain,
        }
    }

    /// `min{c (w_u ∧ w_v)^σ (w_u ∨ w_v) / (W dist^d), 1}^α`, threshold for `α = ∞`.
    pub fn geometric(sigma: f64, alpha: Alpha, dim: usize, scale: f64, total: f64) -> Self {
        Self {
            sigma,
            alpha,
            dim: dim as i32,
            scale,
            total,
            shape: Shape::Geometric,
        }
    }

    pub fn rgg(dim: usize, radius: f64) -> Self {
        Self {
            sigma: 1.0,
            alpha: Alpha::Infinite,
            dim: dim as i32,
            scale: 1.0,
            total: 1.0,
            shape: Shape::Rgg(radius),
        }
    }

    /// `(w_u ∧ w_v)^σ (w_u ∨ w_v)`.
    #[inline]
    pub fn mass(&self, wu: f64, wv: f64) -> f64 {
        let (lo, hi) = if wu < wv { (wu, wv) } else { (wv, wu) };
        if self.sigma == 1.0 {
            lo * hi
        } else {
            lo.powf(self.sigma) * hi
        }
    }

    #[inline]
    pub fn prob(&self, wu: f64, wv: f64, dist: f64) -> f64 {
        match self.shape {
            Shape::Rgg(r) => (dist <= r) as u8 as f64,
            Shape::Plain => (self.scale * self.mass(wu, wv) / self.total).min(1.0),
            Shape::Geometric => {
                if dist == 0.0 {
                    return 1.0;
                }
                let num = self.scale * self.mass(wu, wv);
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
    }
}

/// Connection probability between weights `w_u`, `w_v` at torus distance `dist`
/// under `params`, with total weight `total` and kernel scale `scale`.
pub fn connection_probability(w_u: f64, w_v: f64, dist: f64, params: &ModelParams, total: f64, scale: f64) -> f64 {
    params.kernel(total, scale).prob(w_u, w_v, dist)
}

#[cfg(test)]
mod tests {
    use super::super::Model;
    use super::*;

    #[test]
    fn zero_distance_always_connects() {
        let k = Kernel::geometric(0.3, Alpha::Finite(2.0), 2, 1e-6, 1e6);
        assert_eq!(k.prob(1.0, 1.0, 0.0), 1.0);
        let k = Kernel::geometric(0.3, Alpha::Infinite, 2, 1e-6, 1e6);
        assert_eq!(k.prob(1.0, 1.0, 0.0), 1.0);
    }

    #[test]
    fn reduces_to_girg_kernel() {
        let k = Kernel::geometric(1.0, Alpha::Finite(1.0), 2, 2.0, 100.0);
        let (wu, wv, d): (f64, f64, f64) = (3.0, 5.0, 0.4);
        let expect = (2.0 * wu * wv / (100.0 * d * d)).min(1.0);
        assert!((k.prob(wu, wv, d) - expect).abs() < 1e-15);
        let k = Kernel::geometric(1.0, Alpha::Finite(2.0), 2, 2.0, 100.0);
        assert!((k.prob(wu, wv, d) - expect.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn threshold_radius() {
        // c = 1, unit weights, W = n: connect iff dist <= n^{-1/d}
        let n = 400.0;
        let k = Kernel::geometric(0.5, Alpha::Infinite, 2, 1.0, n);
        let r = n.powf(-0.5);
        assert_eq!(k.prob(1.0, 1.0, r * 0.999), 1.0);
        assert_eq!(k.prob(1.0, 1.0, r * 1.001), 0.0);
    }

    #[test]
    fn tunable_mass_uses_smaller_weight() {
        let k = Kernel::plain(0.5, 1.0, 1e6);
        assert!((k.mass(4.0, 9.0) - 18.0).abs() < 1e-12);
        assert_eq!(k.mass(4.0, 9.0), k.mass(9.0, 4.0));
        assert_eq!(Kernel::plain(1.0, 1.0, 2.0).prob(5.0, 5.0, 0.3), 1.0);
    }

    #[test]
    fn params_dispatch() {
        let p = ModelParams::new(Model::ChungLu, 10).sigma(0.2);
        // chung_lu ignores sigma
        assert!((connection_probability(2.0, 3.0, 0.1, &p, 60.0, 1.0) - 0.1).abs() < 1e-15);
    }
}
