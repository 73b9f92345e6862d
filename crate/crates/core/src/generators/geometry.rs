use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Points on the torus `[0,1)^d`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositionMatrix {
    pub dim: usize,
    pub coords: Vec<f64>,
}

impl PositionMatrix {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::param("coordinate count is not a multiple of the dimension"));
        }
        if coords.iter().any(|c| !(0.0..1.0).contains(c)) {
            return Err(Error::param("coordinates must lie in [0, 1)"));
        }
        Ok(Self { dim, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, v: usize) -> &[f64] {
        &self.coords[v * self.dim..(v + 1) * self.dim]
    }

    pub(crate) fn dist(&self, u: usize, v: usize) -> f64 {
        torus_dist(self.point(u), self.point(v))
    }
}

pub fn sample_positions<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> PositionMatrix {
    PositionMatrix {
        dim,
        coords: (0..n * dim).map(|_| rng.random::<f64>()).collect(),
    }
}

/// Max-norm distance on the torus: `max_i min(|x_i - y_i|, 1 - |x_i - y_i|)`.
pub fn torus_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(x.len(), y.len()));
    }
    Ok(torus_dist(x, y))
}

#[inline]
pub(crate) fn torus_dist(x: &[f64], y: &[f64]) -> f64 {
    let mut best = 0.0f64;
    for (a, b) in x.iter().zip(y) {
        let d = (a - b).abs();
        best = best.max(d.min(1.0 - d));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances() {
        assert_eq!(torus_distance(&[0.3, 0.4], &[0.3, 0.4]).unwrap(), 0.0);
        assert!((torus_distance(&[0.1], &[0.9]).unwrap() - 0.2).abs() < 1e-12);
        assert!((torus_distance(&[0.1, 0.5], &[0.9, 0.6]).unwrap() - 0.2).abs() < 1e-12);
        assert!(matches!(
            torus_distance(&[0.1], &[0.1, 0.2]),
            Err(Error::DimensionMismatch(1, 2))
        ));
    }

    #[test]
    fn positions_in_unit_cube() {
        let mut rng = crate::rng::stream(3, 0, 0);
        let p = sample_positions(100, 3, &mut rng);
        assert_eq!(p.len(), 100);
        assert!(p.coords.iter().all(|c| (0.0..1.0).contains(c)));
        assert!(PositionMatrix::new(2, vec![0.5, 1.0]).is_err());
    }
}
