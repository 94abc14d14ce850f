//! Network input features and the stacked `[value | d/dx1 | d/dx2]` layout.

use std::f64::consts::TAU;

use crate::autodiff::{SpatialDual, Tensor};

/// How a point `(x1, x2)` is presented to a network.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputEmbedding {
    /// `(x1, x2)`.
    Cartesian,
    /// `(cos(2 pi x1 / period), sin(2 pi x1 / period), x2)`; periodic in x1.
    Periodic { period: f64 },
}

impl InputEmbedding {
    pub fn dim(&self) -> usize {
        match self {
            InputEmbedding::Cartesian => 2,
            InputEmbedding::Periodic { .. } => 3,
        }
    }

    /// Features of one point with their spatial derivatives.
    pub fn features(&self, x: [f64; 2]) -> Vec<SpatialDual<f64>> {
        let x1 = SpatialDual::seed_x1(x[0]);
        let x2 = SpatialDual::seed_x2(x[1]);
        match *self {
            InputEmbedding::Cartesian => vec![x1, x2],
            InputEmbedding::Periodic { period } => {
                let a = x1 * (TAU / period);
                vec![a.cos(), a.sin(), x2]
            }
        }
    }

    /// Stacks features of `points` column-wise. With `duals`, the result is
    /// `dim x 3n` holding values, d/dx1 and d/dx2 blocks; otherwise `dim x n`.
    pub fn stack(&self, points: &[[f64; 2]], duals: bool) -> Tensor {
        let n = points.len();
        let blocks = if duals { 3 } else { 1 };
        let dim = self.dim();
        let cols = blocks * n;
        let mut data = vec![0.0; dim * cols];
        for (i, &p) in points.iter().enumerate() {
            for (r, f) in self.features(p).into_iter().enumerate() {
                let row = &mut data[r * cols..(r + 1) * cols];
                row[i] = f.value;
                if duals {
                    row[n + i] = f.dx1;
                    row[2 * n + i] = f.dx2;
                }
            }
        }
        Tensor::from_vec(dim, cols, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_features_repeat_across_the_period() {
        let e = InputEmbedding::Periodic { period: 1.0 };
        let a = e.features([0.0, -0.3]);
        let b = e.features([1.0, -0.3]);
        for (u, v) in a.iter().zip(&b) {
            assert!((u.value - v.value).abs() < 1e-15);
            assert!((u.dx1 - v.dx1).abs() < 1e-12);
        }
    }

    #[test]
    fn stacking_layout() {
        let t = InputEmbedding::Cartesian.stack(&[[1.0, 2.0], [3.0, 4.0]], true);
        assert_eq!(t.shape(), (2, 6));
        assert_eq!(t.data(), &[1.0, 3.0, 1.0, 1.0, 0.0, 0.0, 2.0, 4.0, 0.0, 0.0, 1.0, 1.0]);
    }
}
