//! Supervised fit of the level-set network to an initial guess.
//!
//! Matrix-type domains start from a disk of radius 0.25 at the center
//! (`phi = |x - c| - 0.25`); the layer starts from a flat interface
//! (`phi = y + 0.25`).

use crate::error::{Error, Result};
use crate::networks::{FieldBundle, FieldRole};
use crate::problem::ProblemFamily;

use super::optim::Adam;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PretrainConfig {
    pub epochs: usize,
    pub lr: f64,
}

impl Default for PretrainConfig {
    fn default() -> Self {
        Self { epochs: 800, lr: 1e-3 }
    }
}

/// Supervised label at `x`.
pub fn levelset_label(family: ProblemFamily, x: [f64; 2]) -> f64 {
    match family {
        ProblemFamily::Layer => x[1] + 0.25,
        _ => {
            let d = family.domain();
            let c = [(d.x_min + d.x_max) / 2.0, (d.y_min + d.y_max) / 2.0];
            (x[0] - c[0]).hypot(x[1] - c[1]) - 0.25
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PretrainReport {
    /// Mean absolute label error before each update.
    pub losses: Vec<f64>,
    /// Mean absolute label error after the last update.
    pub final_mae: f64,
}

/// Mean absolute deviation of the level set from the labels at `points`.
pub fn label_mae(bundle: &FieldBundle, points: &[[f64; 2]]) -> Result<f64> {
    let phi = bundle.eval_values(FieldRole::Phi, points)?;
    let family = bundle.family();
    Ok(points
        .iter()
        .zip(&phi)
        .map(|(p, v)| (v - levelset_label(family, *p)).abs())
        .sum::<f64>()
        / points.len() as f64)
}

/// Minimizes `mean |phi(x_i) - phi_i|` over all `points` with full-set ADAM
/// steps, one per epoch. Only the level-set parameters change.
pub fn pretrain_levelset(
    bundle: &mut FieldBundle,
    points: &[[f64; 2]],
    cfg: &PretrainConfig,
) -> Result<PretrainReport> {
    use crate::autodiff::{Tape, Tensor, UnaryKind};

    if points.is_empty() {
        return Err(Error::Config("pretraining needs collocation points".into()));
    }
    let idx = bundle
        .position(FieldRole::Phi)
        .ok_or_else(|| Error::Config("bundle has no level-set network".into()))?;
    let family = bundle.family();
    let labels = Tensor::row(points.iter().map(|p| levelset_label(family, *p)).collect());
    let mut params = bundle.nets()[idx].1.params().values().to_vec();
    let mut adam = Adam::new(params.len());
    let mut losses = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let grads = {
            let tape = Tape::new();
            let leaves = bundle.register(&tape);
            let f = bundle.eval_tape(&tape, &leaves, points, &[FieldRole::Phi], false)?;
            let diff = f.get(FieldRole::Phi).value - tape.constant(labels.clone());
            let loss = diff.unary(UnaryKind::Abs).mean();
            losses.push(loss.item());
            tape.grad_params(loss, leaves.net(idx))?
        };
        adam.step(&mut params, &grads, cfg.lr).map_err(|e| match e {
            Error::NonFinite { detail, .. } => Error::NonFinite {
                epoch,
                update: 0,
                detail: format!("pretraining: {detail}"),
            },
            other => other,
        })?;
        bundle
            .net_mut(FieldRole::Phi)
            .expect("level-set network")
            .params_mut()
            .values_mut()
            .copy_from_slice(&params);
    }
    Ok(PretrainReport {
        losses,
        final_mae: label_mae(bundle, points)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert!((levelset_label(ProblemFamily::Matrix, [0.3, 0.4]) - 0.25).abs() < 1e-15);
        assert!((levelset_label(ProblemFamily::Layer, [0.7, -0.1]) - 0.15).abs() < 1e-15);
        assert!((levelset_label(ProblemFamily::WideMatrix, [0.0, 0.0]) + 0.25).abs() < 1e-15);
    }
}
