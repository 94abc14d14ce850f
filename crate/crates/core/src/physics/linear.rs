//! Small-strain plane-strain elasticity.
//!
//! Stress-strain form, used for voids and soft inclusions:
//! `sigma - rho C eps - (1 - rho) C_inc eps = 0`.
//! Strain-stress form, used for stiff and rigid inclusions:
//! `eps - rho S sigma - (1 - rho) S_inc sigma = 0` with the plane-strain
//! compliance `S sigma = (1 + nu)/E sigma - nu (1 + nu)/E tr(sigma) I`.

use super::phase_weight;
use crate::autodiff::{Scalar, SpatialDual};
use crate::error::{Error, Result};

/// Lamé constants `(lambda, mu)` of `(E, nu)`.
pub fn lame(e: f64, nu: f64) -> (f64, f64) {
    (e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), e / (2.0 * (1.0 + nu)))
}

/// Material filling the `rho = 0` phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LinearInclusion {
    Void,
    Elastic { e: f64, nu: f64 },
    Rigid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstitutiveForm {
    StressStrain,
    StrainStress,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearModel {
    pub e: f64,
    pub nu: f64,
    pub inclusion: LinearInclusion,
    pub form: ConstitutiveForm,
    /// SIMP exponent replacing the `rho` weight by `rho^p`.
    pub simp: Option<f64>,
}

impl LinearModel {
    /// Matrix with the form the inclusion calls for: stress-strain for voids
    /// and inclusions softer than the matrix, strain-stress otherwise.
    pub fn new(e: f64, nu: f64, inclusion: LinearInclusion) -> Self {
        let form = match inclusion {
            LinearInclusion::Void => ConstitutiveForm::StressStrain,
            LinearInclusion::Elastic { e: ei, .. } if ei <= e => ConstitutiveForm::StressStrain,
            _ => ConstitutiveForm::StrainStress,
        };
        Self {
            e,
            nu,
            inclusion,
            form,
            simp: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e > 0.0) || !(-1.0 < self.nu && self.nu < 0.5) {
            return Err(Error::Config(format!(
                "matrix moduli E = {}, nu = {} are not admissible",
                self.e, self.nu
            )));
        }
        match (self.form, self.inclusion) {
            (ConstitutiveForm::StrainStress, LinearInclusion::Void) => Err(Error::Config(
                "a void has zero modulus and no compliance; use the stress-strain form".into(),
            )),
            (ConstitutiveForm::StrainStress, LinearInclusion::Elastic { e: 0.0, .. }) => Err(Error::Config(
                "inclusion modulus is zero; the strain-stress form divides by it, use the stress-strain form".into(),
            )),
            (ConstitutiveForm::StressStrain, LinearInclusion::Rigid) => Err(Error::Config(
                "a rigid inclusion has infinite stiffness; use the strain-stress form".into(),
            )),
            (_, LinearInclusion::Elastic { e, nu }) if e < 0.0 || !(-1.0 < nu && nu < 0.5) => Err(Error::Config(
                format!("inclusion moduli E = {e}, nu = {nu} are not admissible"),
            )),
            (_, _) if matches!(self.simp, Some(p) if !(p > 0.0)) => {
                Err(Error::Config("SIMP exponent must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Linear-elastic state fields.
#[derive(Clone, Copy, Debug)]
pub struct LinearState<S> {
    pub u1: SpatialDual<S>,
    pub u2: SpatialDual<S>,
    pub s11: SpatialDual<S>,
    pub s22: SpatialDual<S>,
    pub s12: SpatialDual<S>,
}

#[derive(Clone, Copy, Debug)]
pub struct LinearResidual<S> {
    pub equilibrium: [S; 2],
    /// Components 11, 22, 12.
    pub constitutive: [S; 3],
}

/// `C eps` as (11, 22, 12).
fn stiffness<S: Scalar>(e: f64, nu: f64, eps: [S; 3]) -> [S; 3] {
    let (lambda, mu) = lame(e, nu);
    let tr = eps[0] + eps[1];
    [
        tr * lambda + eps[0] * (2.0 * mu),
        tr * lambda + eps[1] * (2.0 * mu),
        eps[2] * (2.0 * mu),
    ]
}

/// Plane-strain `S sigma` as (11, 22, 12).
fn compliance<S: Scalar>(e: f64, nu: f64, sig: [S; 3]) -> [S; 3] {
    let a = (1.0 + nu) / e;
    let b = nu * (1.0 + nu) / e;
    let tr = sig[0] + sig[1];
    [sig[0] * a - tr * b, sig[1] * a - tr * b, sig[2] * a]
}

pub fn residual_linear<S: Scalar>(s: &LinearState<S>, rho: S, m: &LinearModel) -> Result<LinearResidual<S>> {
    m.validate()?;
    let equilibrium = [s.s11.dx1 + s.s12.dx2, s.s12.dx1 + s.s22.dx2];
    let eps = [s.u1.dx1, s.u2.dx2, (s.u1.dx2 + s.u2.dx1) * 0.5];
    let sig = [s.s11.value, s.s22.value, s.s12.value];
    let w = phase_weight(rho, m.simp);
    let v = (-w) + 1.0;
    let constitutive = match m.form {
        ConstitutiveForm::StressStrain => {
            let mat = stiffness(m.e, m.nu, eps);
            let inc = match m.inclusion {
                LinearInclusion::Elastic { e, nu } => Some(stiffness(e, nu, eps)),
                _ => None,
            };
            let mut out = [sig[0], sig[1], sig[2]];
            for k in 0..3 {
                out[k] = out[k] - w * mat[k];
                if let Some(inc) = inc {
                    out[k] = out[k] - v * inc[k];
                }
            }
            out
        }
        ConstitutiveForm::StrainStress => {
            let mat = compliance(m.e, m.nu, sig);
            let inc = match m.inclusion {
                LinearInclusion::Elastic { e, nu } => Some(compliance(e, nu, sig)),
                _ => None,
            };
            let mut out = eps;
            for k in 0..3 {
                out[k] = out[k] - w * mat[k];
                if let Some(inc) = inc {
                    out[k] = out[k] - v * inc[k];
                }
            }
            out
        }
    };
    Ok(LinearResidual {
        equilibrium,
        constitutive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: f64, a: f64, b: f64) -> SpatialDual<f64> {
        SpatialDual::new(v, a, b)
    }

    #[test]
    fn lame_constants() {
        let (l, m) = lame(1.0, 0.3);
        assert!((l - 0.576923).abs() < 5e-7);
        assert!((m - 0.384615).abs() < 5e-7);
    }

    #[test]
    fn uniaxial_plane_strain_state_is_exact() {
        let (p, e, nu): (f64, f64, f64) = (0.01, 1.0, 0.3);
        let a = (1.0 - nu * nu) * p / e;
        let b = -nu * (1.0 + nu) * p / e;
        assert!((a - 0.0091).abs() < 1e-15 && (b + 0.0039).abs() < 1e-15);
        let (lambda, _) = lame(e, nu);
        let s22 = lambda * (a + b) + 2.0 * lame(e, nu).1 * b;
        // Plane strain: sigma22 is zero and sigma33 carries the constraint.
        assert!(s22.abs() < 1e-15);
        let st = LinearState {
            u1: d(a * 0.2, a, 0.0),
            u2: d(b * 0.1, 0.0, b),
            s11: d(p, 0.0, 0.0),
            s22: d(0.0, 0.0, 0.0),
            s12: d(0.0, 0.0, 0.0),
        };
        for m in [
            LinearModel::new(e, nu, LinearInclusion::Void),
            LinearModel::new(e, nu, LinearInclusion::Rigid),
        ] {
            let r = residual_linear(&st, 1.0, &m).unwrap();
            for v in r.equilibrium.iter().chain(&r.constitutive) {
                assert!(v.abs() <= 1e-15, "{v}");
            }
        }
    }

    #[test]
    fn void_phase_forces_zero_stress() {
        let st = LinearState {
            u1: d(0.0, 0.3, 0.1),
            u2: d(0.0, -0.2, 0.4),
            s11: d(1.5, 0.0, 0.0),
            s22: d(-0.5, 0.0, 0.0),
            s12: d(0.25, 0.0, 0.0),
        };
        let r = residual_linear(&st, 0.0, &LinearModel::new(1.0, 0.3, LinearInclusion::Void)).unwrap();
        assert_eq!(r.constitutive, [1.5, -0.5, 0.25]);
        let r = residual_linear(&st, 0.0, &LinearModel::new(1.0, 0.3, LinearInclusion::Rigid)).unwrap();
        assert_eq!(r.constitutive, [0.3, 0.4, 0.5 * (0.1 - 0.2)]);
    }

    #[test]
    fn invalid_forms_are_configuration_errors() {
        let mut m = LinearModel::new(1.0, 0.3, LinearInclusion::Void);
        m.form = ConstitutiveForm::StrainStress;
        assert!(matches!(m.validate(), Err(Error::Config(_))));
        let mut m = LinearModel::new(1.0, 0.3, LinearInclusion::Elastic { e: 0.0, nu: 0.3 });
        m.form = ConstitutiveForm::StrainStress;
        assert!(matches!(m.validate(), Err(Error::Config(_))));
        assert_eq!(
            LinearModel::new(1.0, 0.3, LinearInclusion::Elastic { e: 5.0, nu: 0.3 }).form,
            ConstitutiveForm::StrainStress
        );
    }
}
