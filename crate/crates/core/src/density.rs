//! Level set to density map and the eikonal narrow band.
//!
//! `rho = sigmoid(phi / delta)` puts the phase boundary at `phi = 0`. The
//! narrow band `|phi| < w / 2` with `w = 10 delta` covers the transition region,
//! since `sigmoid(+-5)` is within 0.7% of 0 or 1.

use crate::autodiff::{Scalar, SpatialDual};
use crate::error::Result;
use crate::networks::{FieldBundle, FieldRole};

/// Default transition length.
pub const DEFAULT_DELTA: f64 = 0.01;

/// Regularizer inside the gradient norm, `|grad phi| = sqrt(dx1^2 + dx2^2 + EPS)`.
pub const GRAD_NORM_EPS: f64 = 1e-24;

/// Density parameters: transition length `delta` and band width `w = 10 delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevelSetDensity {
    pub delta: f64,
    pub band: f64,
}

impl Default for LevelSetDensity {
    fn default() -> Self {
        Self::new(DEFAULT_DELTA)
    }
}

impl LevelSetDensity {
    pub fn new(delta: f64) -> Self {
        Self {
            delta,
            band: 10.0 * delta,
        }
    }

    /// `sigmoid(phi / delta)` with chain-ruled spatial derivatives.
    pub fn density<S: Scalar>(&self, phi: SpatialDual<S>) -> SpatialDual<S> {
        (phi / self.delta).sigmoid()
    }

    /// Strict band membership `|phi| < w / 2`.
    pub fn in_band(&self, phi: f64) -> bool {
        phi.abs() < 0.5 * self.band
    }

    /// Band membership of each level-set value.
    pub fn narrow_band_mask(&self, phi: &[f64]) -> Vec<bool> {
        phi.iter().map(|&p| self.in_band(p)).collect()
    }

    /// Density with spatial derivatives at `x` for a bundle's level set.
    pub fn density_at(&self, bundle: &FieldBundle, x: [f64; 2]) -> Result<SpatialDual<f64>> {
        Ok(self.density(bundle.eval_constrained(FieldRole::Phi, x)?))
    }

    /// Subset of `points` inside the band of the bundle's current level set.
    pub fn band_points(&self, bundle: &FieldBundle, points: &[[f64; 2]]) -> Result<Vec<[f64; 2]>> {
        let phi = bundle.eval_many(FieldRole::Phi, points)?;
        Ok(points
            .iter()
            .zip(&phi)
            .filter(|(_, f)| self.in_band(f.value))
            .map(|(p, _)| *p)
            .collect())
    }
}

/// `|grad phi|` with the [`GRAD_NORM_EPS`] regularization.
pub fn grad_norm<S: Scalar>(phi: SpatialDual<S>) -> S {
    (phi.grad_norm_sq() + GRAD_NORM_EPS).sqrt()
}

/// `(|grad phi| - 1)^2`.
pub fn eikonal_residual<S: Scalar>(phi: SpatialDual<S>) -> S {
    (grad_norm(phi) - 1.0).square()
}

/// Eikonal residual of a bundle's level set at `x`.
pub fn eikonal_residual_at(bundle: &FieldBundle, x: [f64; 2]) -> Result<f64> {
    Ok(eikonal_residual(bundle.eval_constrained(FieldRole::Phi, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_values() {
        let d = LevelSetDensity::default();
        assert_eq!(d.density(SpatialDual::constant(0.0)).value, 0.5);
        assert!((d.density(SpatialDual::constant(0.05)).value - 0.993307).abs() < 5e-7);
        assert!((d.density(SpatialDual::constant(-0.05)).value - 0.006693).abs() < 5e-7);
    }

    #[test]
    fn band_is_strict() {
        let d = LevelSetDensity::default();
        assert!(d.in_band(0.04));
        assert!(!d.in_band(0.05));
        assert!(!d.in_band(-0.05));
    }

    #[test]
    fn eikonal_values() {
        assert_eq!(eikonal_residual(SpatialDual::new(0.3, 1.0, 0.0)), 0.0);
        assert_eq!(eikonal_residual(SpatialDual::new(0.3, 2.0, 0.0)), 1.0);
        assert!((eikonal_residual(SpatialDual::new(0.3, 0.0, 0.0)) - 1.0).abs() < 1e-11);
        let sdf = |x: SpatialDual<f64>, y: SpatialDual<f64>| (x.square() + y.square()).sqrt() - 0.25;
        let phi = sdf(SpatialDual::seed_x1(0.3), SpatialDual::seed_x2(0.0));
        assert_eq!(eikonal_residual(phi), 0.0);
    }
}
