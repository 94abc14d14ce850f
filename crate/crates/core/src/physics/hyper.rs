//! Incompressible Neo-Hookean solid in the reference configuration.
//!
//! `div S = 0`, `S = rho (-p F^-T + mu F)`, `rho (det F - 1) = 0`, with
//! `F = I + s grad u`. The factor `s` converts nondimensional displacement
//! gradients back to physical ones (`s = P_o / E`); it is 1 for unscaled input.

use crate::autodiff::{Scalar, SpatialDual};
use crate::error::{Error, Result};

/// Determinants closer to zero than this are shifted away before inverting `F`.
pub const DET_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HyperModel {
    /// Shear modulus in the units of `S` and `p`.
    pub mu: f64,
    /// Displacement-gradient scale inside `F`.
    pub disp_scale: f64,
}

impl HyperModel {
    pub fn validate(&self) -> Result<()> {
        if self.mu > 0.0 && self.disp_scale > 0.0 {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "Neo-Hookean parameters mu = {}, scale = {} must be positive",
                self.mu, self.disp_scale
            )))
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct HyperState<S> {
    pub u1: SpatialDual<S>,
    pub u2: SpatialDual<S>,
    pub s11: SpatialDual<S>,
    pub s22: SpatialDual<S>,
    pub s12: SpatialDual<S>,
    pub s21: SpatialDual<S>,
    pub p: SpatialDual<S>,
}

#[derive(Clone, Copy, Debug)]
pub struct HyperResidual<S> {
    pub equilibrium: [S; 2],
    /// Components 11, 22, 12, 21.
    pub constitutive: [S; 4],
    pub incompressibility: S,
    /// Number of entries whose determinant was regularized.
    pub degenerate: usize,
}

pub fn residual_hyper<S: Scalar>(s: &HyperState<S>, rho: S, m: &HyperModel) -> HyperResidual<S> {
    let k = m.disp_scale;
    let f11 = s.u1.dx1 * k + 1.0;
    let f12 = s.u1.dx2 * k;
    let f21 = s.u2.dx1 * k;
    let f22 = s.u2.dx2 * k + 1.0;
    let det = f11 * f22 - f12 * f21;
    let degenerate = det.count_small(DET_EPS);
    let det_safe = det.guard_nonzero(DET_EPS);
    // F^-T = [[f22, -f21], [-f12, f11]] / det
    let p = s.p.value;
    let q = p / det_safe;
    let model = [
        f11 * m.mu - q * f22,
        f22 * m.mu - q * f11,
        f12 * m.mu + q * f21,
        f21 * m.mu + q * f12,
    ];
    let stress = [s.s11.value, s.s22.value, s.s12.value, s.s21.value];
    let mut constitutive = stress;
    for i in 0..4 {
        constitutive[i] = stress[i] - rho * model[i];
    }
    HyperResidual {
        equilibrium: [s.s11.dx1 + s.s12.dx2, s.s21.dx1 + s.s22.dx2],
        constitutive,
        incompressibility: rho * (det - 1.0),
        degenerate,
    }
}
