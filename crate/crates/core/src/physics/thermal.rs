//! Nonlinear steady heat conduction, `q = -k (1 + T/T0) grad T`, `div q = 0`.
//!
//! Insulating inclusions use `q + rho k (1 + T/T0) grad T = 0`, which forces
//! `q = 0` where `rho = 0`. Conducting inclusions use
//! `rho q / k + (1 + T/T0) grad T = 0`, which forces `grad T = 0` there.

use crate::autodiff::{Scalar, SpatialDual};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThermalInclusion {
    Insulating,
    Conducting,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalModel {
    pub k: f64,
    pub t0: f64,
    pub inclusion: ThermalInclusion,
}

impl ThermalModel {
    pub fn validate(&self) -> Result<()> {
        if self.k > 0.0 && self.t0 > 0.0 {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "conductivity k = {} and reference temperature T0 = {} must be positive",
                self.k, self.t0
            )))
        }
    }

    /// Temperature-dependent conductivity `k (1 + T/T0)`.
    pub fn conductivity(&self, t: f64) -> f64 {
        self.k * (1.0 + t / self.t0)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ThermalState<S> {
    pub t: SpatialDual<S>,
    pub q1: SpatialDual<S>,
    pub q2: SpatialDual<S>,
}

#[derive(Clone, Copy, Debug)]
pub struct ThermalResidual<S> {
    pub conservation: S,
    pub fourier: [S; 2],
}

pub fn residual_thermal<S: Scalar>(s: &ThermalState<S>, rho: S, m: &ThermalModel) -> ThermalResidual<S> {
    let factor = s.t.value / m.t0 + 1.0;
    let fourier = match m.inclusion {
        ThermalInclusion::Insulating => {
            let c = rho * factor * m.k;
            [s.q1.value + c * s.t.dx1, s.q2.value + c * s.t.dx2]
        }
        ThermalInclusion::Conducting => {
            let c = rho / m.k;
            [c * s.q1.value + factor * s.t.dx1, c * s.q2.value + factor * s.t.dx2]
        }
    };
    ThermalResidual {
        conservation: s.q1.dx1 + s.q2.dx2,
        fourier,
    }
}
