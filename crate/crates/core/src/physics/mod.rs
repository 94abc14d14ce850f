//! Governing-equation residuals and nondimensionalization.
//!
//! Residuals are generic over [`Scalar`], so the same code evaluates single
//! points in `f64` and mini-batches of tape variables. Every constitutive law
//! interpolates between the matrix (`rho = 1`) and inclusion (`rho = 0`)
//! phases with a weight that is affine in `rho`, or `rho^p` under SIMP.

mod hyper;
mod linear;
mod rescale;
mod thermal;

pub use hyper::{residual_hyper, HyperModel, HyperState};
pub use linear::{lame, residual_linear, ConstitutiveForm, LinearInclusion, LinearModel, LinearState};
pub use rescale::Scales;
pub use thermal::{residual_thermal, ThermalInclusion, ThermalModel, ThermalState};

use crate::autodiff::Scalar;
use crate::error::{Error, Result};
use crate::networks::{FieldRole, FieldValues};
use crate::problem::PhysicsKind;

/// Material description of a case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MaterialModel {
    Linear(LinearModel),
    Hyper(HyperModel),
    Thermal(ThermalModel),
}

impl MaterialModel {
    pub fn physics(&self) -> PhysicsKind {
        match self {
            MaterialModel::Linear(_) => PhysicsKind::LinearElastic,
            MaterialModel::Hyper(_) => PhysicsKind::NeoHookean,
            MaterialModel::Thermal(_) => PhysicsKind::Thermal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MaterialModel::Linear(m) => m.validate(),
            MaterialModel::Hyper(m) => m.validate(),
            MaterialModel::Thermal(m) => m.validate(),
        }
    }

    /// Replaces the `rho` interpolation weight by `rho^p`.
    pub fn with_simp(self, p: Option<f64>) -> Result<Self> {
        match (self, p) {
            (m, None) => Ok(m),
            (MaterialModel::Linear(m), Some(p)) => Ok(MaterialModel::Linear(LinearModel { simp: Some(p), ..m })),
            _ => Err(Error::Config(
                "SIMP interpolation is only defined for linear elasticity".into(),
            )),
        }
    }
}

/// Physical fields at a set of points, grouped by physics.
#[derive(Clone, Copy, Debug)]
pub enum StateEval<S> {
    Linear(LinearState<S>),
    Hyper(HyperState<S>),
    Thermal(ThermalState<S>),
}

impl<S: Scalar> StateEval<S> {
    /// Picks the state fields of `physics` out of evaluated bundle fields.
    pub fn from_fields(physics: PhysicsKind, f: &FieldValues<S>) -> Self {
        match physics {
            PhysicsKind::LinearElastic => StateEval::Linear(LinearState {
                u1: f.get(FieldRole::U1),
                u2: f.get(FieldRole::U2),
                s11: f.get(FieldRole::S11),
                s22: f.get(FieldRole::S22),
                s12: f.get(FieldRole::S12),
            }),
            PhysicsKind::NeoHookean => StateEval::Hyper(HyperState {
                u1: f.get(FieldRole::U1),
                u2: f.get(FieldRole::U2),
                s11: f.get(FieldRole::S11),
                s22: f.get(FieldRole::S22),
                s12: f.get(FieldRole::S12),
                s21: f.get(FieldRole::S21),
                p: f.get(FieldRole::Pressure),
            }),
            PhysicsKind::Thermal => StateEval::Thermal(ThermalState {
                t: f.get(FieldRole::Temperature),
                q1: f.get(FieldRole::Q1),
                q2: f.get(FieldRole::Q2),
            }),
        }
    }
}

/// Residual components, split by the loss weight they receive.
#[derive(Clone, Debug)]
pub struct Residual<S> {
    /// Balance laws: equilibrium or heat conservation.
    pub balance: Vec<S>,
    /// Constitutive law components (weighted by `lambda_cr` in the loss).
    pub constitutive: Vec<S>,
    /// Incompressibility, hyperelastic only.
    pub incompressibility: Vec<S>,
    /// Points whose deformation-gradient determinant needed regularization.
    pub degenerate: usize,
}

/// Residual of `state` with density `rho` under `model`.
pub fn residual<S: Scalar>(state: &StateEval<S>, rho: S, model: &MaterialModel) -> Result<Residual<S>> {
    match (state, model) {
        (StateEval::Linear(s), MaterialModel::Linear(m)) => {
            let r = residual_linear(s, rho, m)?;
            Ok(Residual {
                balance: r.equilibrium.to_vec(),
                constitutive: r.constitutive.to_vec(),
                incompressibility: Vec::new(),
                degenerate: 0,
            })
        }
        (StateEval::Hyper(s), MaterialModel::Hyper(m)) => {
            let r = residual_hyper(s, rho, m);
            Ok(Residual {
                balance: r.equilibrium.to_vec(),
                constitutive: r.constitutive.to_vec(),
                incompressibility: vec![r.incompressibility],
                degenerate: r.degenerate,
            })
        }
        (StateEval::Thermal(s), MaterialModel::Thermal(m)) => {
            let r = residual_thermal(s, rho, m);
            Ok(Residual {
                balance: vec![r.conservation],
                constitutive: r.fourier.to_vec(),
                incompressibility: Vec::new(),
                degenerate: 0,
            })
        }
        _ => Err(Error::Config("state fields do not match the material model".into())),
    }
}

/// Interpolation weight: `rho`, or `rho^p` under SIMP.
pub(crate) fn phase_weight<S: Scalar>(rho: S, simp: Option<f64>) -> S {
    match simp {
        None => rho,
        Some(p) => rho.powf(p),
    }
}
