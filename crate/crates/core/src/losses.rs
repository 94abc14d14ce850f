//! Training objective.
//!
//! `L = lambda_meas L_meas + lambda_gov L_gov + lambda_reg L_reg` where
//! `L_meas` is the mean squared mismatch at the measurement points, `L_gov`
//! the mean squared PDE residual over a collocation batch (constitutive part
//! weighted by `lambda_cr`), and `L_reg` one of the density regularizers.

use std::fmt;
use std::str::FromStr;

use crate::autodiff::{Scalar, SpatialDual, Tape, Tensor, Var};
use crate::dataforge::MeasurementSet;
use crate::density::{eikonal_residual, grad_norm, LevelSetDensity};
use crate::error::{Error, Result};
use crate::networks::{BundleLeaves, FieldBundle, FieldRole};
use crate::physics::{residual, MaterialModel, StateEval};

/// Density regularizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regularizer {
    /// `(|grad phi| - 1)^2` averaged over the narrow band.
    Eikonal,
    /// Mean `|grad rho|`.
    Tvd,
    /// Mean `rho (1 - rho)`.
    Penalization,
    /// No loss term; the constitutive weight becomes `rho^p`.
    Simp(f64),
}

impl Regularizer {
    pub fn name(&self) -> &'static str {
        match self {
            Regularizer::Eikonal => "eikonal",
            Regularizer::Tvd => "tvd",
            Regularizer::Penalization => "penalization",
            Regularizer::Simp(_) => "simp",
        }
    }

    pub fn simp_exponent(&self) -> Option<f64> {
        match self {
            Regularizer::Simp(p) => Some(*p),
            _ => None,
        }
    }
}

impl fmt::Display for Regularizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regularizer::Simp(p) => write!(f, "simp:{p}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Regularizer {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eikonal" => Ok(Regularizer::Eikonal),
            "tvd" => Ok(Regularizer::Tvd),
            "penalization" => Ok(Regularizer::Penalization),
            other => {
                let p = other
                    .strip_prefix("simp:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::Config(format!("unknown regularizer `{other}`")))?;
                if p > 0.0 {
                    Ok(Regularizer::Simp(p))
                } else {
                    Err(Error::Config(format!("SIMP exponent must be positive, got {p}")))
                }
            }
        }
    }
}

/// Loss weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossWeights {
    pub meas: f64,
    pub gov: f64,
    pub reg: f64,
    /// Multiplies the constitutive part of `L_gov`.
    pub cr: f64,
    /// Multiplies the incompressibility part of `L_gov`.
    pub inc: f64,
    pub regularizer: Regularizer,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            meas: 10.0,
            gov: 1.0,
            reg: 1.0,
            cr: 10.0,
            inc: 1.0,
            regularizer: Regularizer::Eikonal,
        }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("meas", self.meas),
            ("gov", self.gov),
            ("reg", self.reg),
            ("cr", self.cr),
            ("inc", self.inc),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "loss weight `{name}` must be a nonnegative number, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Recorded loss components for one update.
pub struct LossBreakdown<'t> {
    pub meas: Var<'t>,
    pub gov: Var<'t>,
    pub reg: Var<'t>,
    pub total: Var<'t>,
    /// Points in the eikonal band (0 for other regularizers).
    pub band_size: usize,
    /// Points where the deformation gradient needed regularization.
    pub degenerate: usize,
}

/// Plain-number copy of a [`LossBreakdown`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LossValues {
    pub meas: f64,
    pub gov: f64,
    pub reg: f64,
    pub total: f64,
    pub band_size: usize,
}

impl LossBreakdown<'_> {
    pub fn values(&self) -> LossValues {
        LossValues {
            meas: self.meas.item(),
            gov: self.gov.item(),
            reg: self.reg.item(),
            total: self.total.item(),
            band_size: self.band_size,
        }
    }
}

/// `(1/|M|) sum_i |psi(x_i) - psi_i|^2` over observed components.
pub fn loss_meas<'t>(
    tape: &'t Tape,
    leaves: &BundleLeaves<'t>,
    bundle: &FieldBundle,
    meas: &MeasurementSet,
) -> Result<Var<'t>> {
    if meas.is_empty() || meas.roles().is_empty() {
        return Err(Error::Config("the measurement set is empty".into()));
    }
    let n = meas.len() as f64;
    let fields = bundle.eval_tape(tape, leaves, meas.points(), meas.roles(), false)?;
    let mut total: Option<Var<'t>> = None;
    for &role in meas.roles() {
        let observed = meas.column(role).expect("role listed in the set");
        let mask: Vec<bool> = observed.iter().map(|v| !v.is_nan()).collect();
        let count = mask.iter().filter(|&&m| m).count();
        let target = tape.constant(Tensor::row(
            observed.iter().map(|v| if v.is_nan() { 0.0 } else { *v }).collect(),
        ));
        let diff = fields.get(role).value - target;
        let term = tape.masked_mean(diff.square(), mask) * (count as f64 / n);
        total = Some(match total {
            Some(t) => t + term,
            None => term,
        });
    }
    Ok(total.expect("at least one role"))
}

/// Squared residual norm summed over components: `sum_k r_k^2`.
fn sum_sq<'t>(parts: &[Var<'t>]) -> Option<Var<'t>> {
    parts.iter().map(|r| r.square()).reduce(|a, b| a + b)
}

/// Governing-equation loss over a collocation batch.
pub fn loss_gov<'t>(
    tape: &'t Tape,
    leaves: &BundleLeaves<'t>,
    bundle: &FieldBundle,
    model: &MaterialModel,
    density: &LevelSetDensity,
    weights: &LossWeights,
    batch: &[[f64; 2]],
) -> Result<(Var<'t>, usize)> {
    if batch.is_empty() {
        return Err(Error::Config("empty collocation batch".into()));
    }
    let physics = bundle.physics();
    if model.physics() != physics {
        return Err(Error::Config("material model does not match the network bundle".into()));
    }
    let mut roles = FieldRole::state_roles(physics).to_vec();
    roles.push(FieldRole::Phi);
    let f = bundle.eval_tape(tape, leaves, batch, &roles, true)?;
    let rho = density.density(f.get(FieldRole::Phi)).value;
    let state = StateEval::from_fields(physics, &f);
    let r = residual(&state, rho, model)?;
    let mut loss = sum_sq(&r.balance).expect("balance residual").mean();
    if let Some(c) = sum_sq(&r.constitutive) {
        loss = loss + c.mean() * weights.cr;
    }
    if let Some(c) = sum_sq(&r.incompressibility) {
        loss = loss + c.mean() * weights.inc;
    }
    Ok((loss, r.degenerate))
}

/// Mean eikonal residual over the band points of `points`.
///
/// The band is taken from the current level-set values unless `fixed_band`
/// supplies a mask (used when differentiating with finite differences). Only
/// band points are recorded on the tape; an empty band contributes zero.
pub fn loss_eik<'t>(
    tape: &'t Tape,
    leaves: &BundleLeaves<'t>,
    bundle: &FieldBundle,
    density: &LevelSetDensity,
    points: &[[f64; 2]],
    fixed_band: Option<&[bool]>,
) -> Result<(Var<'t>, usize)> {
    let mask = match fixed_band {
        Some(m) if m.len() != points.len() => {
            return Err(Error::Dimension(format!(
                "band mask has {} entries for {} points",
                m.len(),
                points.len()
            )))
        }
        Some(m) => m.to_vec(),
        None => density.narrow_band_mask(&bundle.eval_values(FieldRole::Phi, points)?),
    };
    let band: Vec<[f64; 2]> = points.iter().zip(&mask).filter(|(_, &m)| m).map(|(p, _)| *p).collect();
    if band.is_empty() {
        return Ok((tape.scalar(0.0), 0));
    }
    let f = bundle.eval_tape(tape, leaves, &band, &[FieldRole::Phi], true)?;
    Ok((eikonal_residual(f.get(FieldRole::Phi)).mean(), band.len()))
}

/// Total-variation or explicit-penalization regularizer over `points`.
/// SIMP is not an additive loss and is rejected.
pub fn loss_regularizer_alternatives<'t>(
    tape: &'t Tape,
    leaves: &BundleLeaves<'t>,
    bundle: &FieldBundle,
    density: &LevelSetDensity,
    points: &[[f64; 2]],
    kind: Regularizer,
) -> Result<Var<'t>> {
    let f = bundle.eval_tape(tape, leaves, points, &[FieldRole::Phi], kind == Regularizer::Tvd)?;
    let rho = density.density(f.get(FieldRole::Phi));
    match kind {
        Regularizer::Tvd => Ok(grad_norm(rho).mean()),
        Regularizer::Penalization => Ok((rho.value * ((-rho.value) + 1.0)).mean()),
        Regularizer::Simp(_) => Err(Error::Config(
            "SIMP interpolates the moduli and has no additive loss term".into(),
        )),
        Regularizer::Eikonal => Err(Error::Config("use loss_eik for the eikonal regularizer".into())),
    }
}

/// What the regularizer is evaluated on.
#[derive(Clone, Copy, Debug)]
pub struct RegularizerInput<'a> {
    pub points: &'a [[f64; 2]],
    pub fixed_band: Option<&'a [bool]>,
}

/// Everything the objective depends on besides the parameters.
#[derive(Clone, Copy, Debug)]
pub struct LossContext<'a> {
    pub model: &'a MaterialModel,
    pub density: &'a LevelSetDensity,
    pub weights: &'a LossWeights,
    pub measurements: &'a MeasurementSet,
}

/// `lambda_meas L_meas + lambda_gov L_gov + lambda_reg L_reg`.
pub fn total_loss<'t>(
    tape: &'t Tape,
    leaves: &BundleLeaves<'t>,
    bundle: &FieldBundle,
    ctx: &LossContext<'_>,
    batch: &[[f64; 2]],
    reg: RegularizerInput<'_>,
) -> Result<LossBreakdown<'t>> {
    let w = ctx.weights;
    w.validate()?;
    let model = ctx.model.with_simp(w.regularizer.simp_exponent())?;
    let meas = loss_meas(tape, leaves, bundle, ctx.measurements)?;
    let (gov, degenerate) = loss_gov(tape, leaves, bundle, &model, ctx.density, w, batch)?;
    let (reg_loss, band_size) = match w.regularizer {
        Regularizer::Eikonal => loss_eik(tape, leaves, bundle, ctx.density, reg.points, reg.fixed_band)?,
        Regularizer::Simp(_) => (tape.scalar(0.0), 0),
        kind => (
            loss_regularizer_alternatives(tape, leaves, bundle, ctx.density, reg.points, kind)?,
            0,
        ),
    };
    let total = meas * w.meas + gov * w.gov + reg_loss * w.reg;
    Ok(LossBreakdown {
        meas,
        gov,
        reg: reg_loss,
        total,
        band_size,
        degenerate,
    })
}

/// Combines component values with the weights, for reporting.
pub fn weighted_total(w: &LossWeights, meas: f64, gov: f64, reg: f64) -> f64 {
    let reg = if w.regularizer.simp_exponent().is_some() {
        0.0
    } else {
        reg
    };
    w.meas * meas + w.gov * gov + w.reg * reg
}

/// Per-point governing residual norm `|r_bal|^2 + lambda_cr |r_cr|^2 + lambda_inc |r_inc|^2`,
/// evaluated without a tape.
pub fn pointwise_gov(
    bundle: &FieldBundle,
    model: &MaterialModel,
    density: &LevelSetDensity,
    weights: &LossWeights,
    x: [f64; 2],
) -> Result<f64> {
    let f = bundle.eval_point(x)?;
    let rho = density.density(f.get(FieldRole::Phi)).value;
    let state = StateEval::from_fields(bundle.physics(), &f);
    let r = residual(&state, rho, model)?;
    let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    Ok(sq(&r.balance) + weights.cr * sq(&r.constitutive) + weights.inc * sq(&r.incompressibility))
}

/// Density with derivatives at a point: helper for regularizer oracles.
pub fn density_dual(bundle: &FieldBundle, density: &LevelSetDensity, x: [f64; 2]) -> Result<SpatialDual<f64>> {
    density.density_at(bundle, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::networks::TransformParams;
    use crate::physics::{LinearInclusion, LinearModel};
    use crate::problem::{PhysicsKind, ProblemFamily};

    fn bundle() -> FieldBundle {
        FieldBundle::init(
            ProblemFamily::Matrix,
            PhysicsKind::LinearElastic,
            TransformParams { load: 1.0, band: 0.1 },
            &[10, 10],
            10.0,
            11,
        )
        .unwrap()
    }

    #[test]
    fn regularizer_names_parse() {
        for r in [
            Regularizer::Eikonal,
            Regularizer::Tvd,
            Regularizer::Penalization,
            Regularizer::Simp(3.0),
        ] {
            assert_eq!(r.to_string().parse::<Regularizer>().unwrap(), r);
        }
        assert!("simp:-1".parse::<Regularizer>().is_err());
    }

    #[test]
    fn weighted_sum_of_components() {
        let w = LossWeights::default();
        assert!((weighted_total(&w, 0.02, 0.5, 0.1) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn measurement_loss_matches_direct_sum() {
        let b = bundle();
        let pts = vec![[-0.5, 0.1], [0.5, -0.2], [0.1, 0.5]];
        let vals = vec![0.3, f64::NAN, -0.1, 0.2, 0.05, 0.0];
        let m = MeasurementSet::new(pts.clone(), vec![FieldRole::U1, FieldRole::U2], vals.clone()).unwrap();
        let tape = Tape::new();
        let leaves = b.register(&tape);
        let l = loss_meas(&tape, &leaves, &b, &m).unwrap().item();
        let mut expect = 0.0;
        for (i, p) in pts.iter().enumerate() {
            let f = b.eval_point(*p).unwrap();
            for (j, r) in [FieldRole::U1, FieldRole::U2].into_iter().enumerate() {
                let v = vals[2 * i + j];
                if !v.is_nan() {
                    expect += (f.get(r).value - v).powi(2);
                }
            }
        }
        expect /= 3.0;
        assert!((l - expect).abs() < 1e-14 * expect.max(1.0));
    }

    #[test]
    fn simp_as_additive_loss_is_rejected() {
        let b = bundle();
        let tape = Tape::new();
        let leaves = b.register(&tape);
        let d = LevelSetDensity::default();
        let r = loss_regularizer_alternatives(&tape, &leaves, &b, &d, &[[0.0, 0.0]], Regularizer::Simp(3.0));
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn gov_loss_matches_pointwise_mean() {
        let b = bundle();
        let model = MaterialModel::Linear(LinearModel::new(1.0, 0.3, LinearInclusion::Void));
        let d = LevelSetDensity::default();
        let w = LossWeights::default();
        let batch = [[0.1, 0.2], [-0.3, 0.4], [0.0, -0.45]];
        let tape = Tape::new();
        let leaves = b.register(&tape);
        let (g, _) = loss_gov(&tape, &leaves, &b, &model, &d, &w, &batch).unwrap();
        let expect: f64 = batch
            .iter()
            .map(|&x| pointwise_gov(&b, &model, &d, &w, x).unwrap())
            .sum::<f64>()
            / 3.0;
        assert!((g.item() - expect).abs() < 1e-12 * expect.max(1.0));
    }
}
