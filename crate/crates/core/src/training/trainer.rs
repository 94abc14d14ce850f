//! Main optimization loop, loss history and bit-exact checkpoints.
//!
//! Each epoch visits the mini-batches in order. Every update evaluates the
//! governing-equation loss on one mini-batch, the measurement loss on the
//! whole measurement set and the eikonal loss on the whole collocation set.
//! TVD and explicit penalization use the current mini-batch.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::autodiff::Tape;
use crate::dataforge::MeasurementSet;
use crate::density::LevelSetDensity;
use crate::error::{Error, Result};
use crate::losses::{total_loss, LossContext, LossValues, LossWeights, Regularizer, RegularizerInput};
use crate::networks::{bundle_from_archive, bundle_to_archive, Archive, ArchiveArray, FieldBundle, FieldRole};
use crate::physics::MaterialModel;

use super::optim::{Adam, Schedule};
use super::sampling::CollocationSet;

/// Loss above which training is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;

/// Points on which the eikonal band is searched each update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EikonalPoints {
    /// The whole collocation set.
    Full,
    /// The current mini-batch.
    Batch,
}

#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub schedule: Schedule,
    pub weights: LossWeights,
    pub density: LevelSetDensity,
    pub eikonal_points: EikonalPoints,
    pub divergence_threshold: f64,
    /// Save a checkpoint every this many epochs (0 disables).
    pub checkpoint_every: usize,
    /// Checkpoint file; also written when training diverges.
    pub checkpoint_path: Option<PathBuf>,
}

impl TrainConfig {
    pub fn new(schedule: Schedule) -> Self {
        Self {
            schedule,
            weights: LossWeights::default(),
            density: LevelSetDensity::default(),
            eikonal_points: EikonalPoints::Full,
            divergence_threshold: DIVERGENCE_THRESHOLD,
            checkpoint_every: 0,
            checkpoint_path: None,
        }
    }
}

/// Fixed inputs of a training run.
#[derive(Clone, Copy, Debug)]
pub struct TrainData<'a> {
    pub model: &'a MaterialModel,
    pub measurements: &'a MeasurementSet,
    pub collocation: &'a CollocationSet,
}

/// Epoch-averaged loss components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub meas: f64,
    pub gov: f64,
    pub reg: f64,
    pub total: f64,
    /// Mean number of eikonal band points per update.
    pub band: f64,
}

/// Everything needed to continue training.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainState {
    pub bundle: FieldBundle,
    pub adam: Adam,
    /// Completed epochs.
    pub epoch: usize,
    pub history: Vec<EpochRecord>,
}

const HISTORY_COLUMNS: [&str; 6] = ["epoch", "meas", "gov", "reg", "total", "band"];

impl TrainState {
    pub fn new(bundle: FieldBundle) -> Self {
        let n = bundle.num_params();
        Self {
            bundle,
            adam: Adam::new(n),
            epoch: 0,
            history: Vec::new(),
        }
    }

    /// Total loss of the last completed epoch.
    pub fn final_loss(&self) -> Option<f64> {
        self.history.last().map(|r| r.total)
    }

    pub fn to_archive(&self) -> Archive {
        let mut a = bundle_to_archive(&self.bundle);
        a.push_meta("epoch", self.epoch);
        self.adam.write_archive(&mut a);
        let col = |f: fn(&EpochRecord) -> f64| self.history.iter().map(f).collect::<Vec<_>>();
        let cols: [Vec<f64>; 6] = [
            col(|r| r.epoch as f64),
            col(|r| r.meas),
            col(|r| r.gov),
            col(|r| r.reg),
            col(|r| r.total),
            col(|r| r.band),
        ];
        for (name, data) in HISTORY_COLUMNS.iter().zip(cols) {
            a.arrays.push(ArchiveArray::new(format!("history:{name}"), data));
        }
        a
    }

    pub fn from_archive(a: &Archive) -> Result<Self> {
        let bundle = bundle_from_archive(a)?;
        let adam = Adam::read_archive(a)?;
        if adam.len() != bundle.num_params() {
            return Err(Error::Dimension(format!(
                "optimizer state has {} entries for {} parameters",
                adam.len(),
                bundle.num_params()
            )));
        }
        let epoch = a
            .require_meta("epoch")?
            .parse()
            .map_err(|_| Error::Config("archive metadata `epoch` is not an integer".into()))?;
        let mut cols = Vec::new();
        for name in HISTORY_COLUMNS {
            let arr = a
                .array(&format!("history:{name}"))
                .ok_or_else(|| Error::Config(format!("archive lacks history column `{name}`")))?;
            cols.push(arr.data.as_slice());
        }
        if cols.iter().any(|c| c.len() != cols[0].len()) {
            return Err(Error::Dimension("history columns differ in length".into()));
        }
        let history = (0..cols[0].len())
            .map(|i| EpochRecord {
                epoch: cols[0][i] as usize,
                meas: cols[1][i],
                gov: cols[2][i],
                reg: cols[3][i],
                total: cols[4][i],
                band: cols[5][i],
            })
            .collect();
        Ok(Self {
            bundle,
            adam,
            epoch,
            history,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.to_archive().save(path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_archive(&Archive::load(path)?)
    }
}

/// Loss history as CSV with columns `epoch,L_meas,L_gov,L_reg,total`.
pub fn history_csv(history: &[EpochRecord]) -> String {
    let mut s = String::from("epoch,L_meas,L_gov,L_reg,total\n");
    for r in history {
        writeln!(s, "{},{:e},{:e},{:e},{:e}", r.epoch, r.meas, r.gov, r.reg, r.total).expect("string write");
    }
    s
}

pub fn write_history(history: &[EpochRecord], path: &Path) -> Result<()> {
    crate::fsutil::write_atomic(path, history_csv(history).as_bytes())
}

fn tag(e: Error, epoch: usize, update: usize) -> Error {
    match e {
        Error::NonFinite { detail, .. } => Error::NonFinite { epoch, update, detail },
        other => other,
    }
}

/// One gradient update on mini-batch `batch`. Returns the loss values
/// evaluated before the update.
pub fn train_step(state: &mut TrainState, data: &TrainData<'_>, cfg: &TrainConfig, batch: usize) -> Result<LossValues> {
    let points = data.collocation.batch(batch);
    let reg_points = match (cfg.weights.regularizer, cfg.eikonal_points) {
        (Regularizer::Eikonal, EikonalPoints::Full) => data.collocation.points(),
        _ => points,
    };
    let ctx = LossContext {
        model: data.model,
        density: &cfg.density,
        weights: &cfg.weights,
        measurements: data.measurements,
    };
    let (values, grads) = {
        let tape = Tape::new();
        let leaves = state.bundle.register(&tape);
        let reg = RegularizerInput {
            points: reg_points,
            fixed_band: None,
        };
        let l = total_loss(&tape, &leaves, &state.bundle, &ctx, points, reg)?;
        let values = l.values();
        if !values.total.is_finite() {
            return Err(Error::NonFinite {
                epoch: state.epoch,
                update: batch,
                detail: format!(
                    "loss is {} (meas {}, gov {}, reg {})",
                    values.total, values.meas, values.gov, values.reg
                ),
            });
        }
        if values.total > cfg.divergence_threshold {
            return Ok(values);
        }
        (values, tape.grad_params(l.total, &leaves.flat())?)
    };
    let (a_psi, a_phi) = cfg.schedule.rates(state.epoch);
    let groups: Vec<_> = state
        .bundle
        .param_ranges()
        .into_iter()
        .map(|(role, r)| (r, if role == FieldRole::Phi { a_phi } else { a_psi }))
        .collect();
    let mut params = state.bundle.params_flat();
    state
        .adam
        .step_groups(&mut params, &grads, &groups)
        .map_err(|e| tag(e, state.epoch, batch))?;
    state.bundle.set_params_flat(&params)?;
    Ok(values)
}

/// Runs one full epoch and appends its record.
pub fn train_epoch(state: &mut TrainState, data: &TrainData<'_>, cfg: &TrainConfig) -> Result<EpochRecord> {
    let nb = data.collocation.num_batches();
    let mut acc = [0.0; 5];
    for b in 0..nb {
        let v = train_step(state, data, cfg, b)?;
        if v.total > cfg.divergence_threshold {
            if let Some(path) = &cfg.checkpoint_path {
                state.save(path)?;
            }
            return Err(Error::Diverged {
                epoch: state.epoch,
                loss: v.total,
            });
        }
        for (a, x) in acc.iter_mut().zip([v.meas, v.gov, v.reg, v.total, v.band_size as f64]) {
            *a += x;
        }
    }
    let k = nb as f64;
    let rec = EpochRecord {
        epoch: state.epoch,
        meas: acc[0] / k,
        gov: acc[1] / k,
        reg: acc[2] / k,
        total: acc[3] / k,
        band: acc[4] / k,
    };
    state.history.push(rec);
    state.epoch += 1;
    Ok(rec)
}

/// Trains until `state.epoch == until` (capped at the schedule length),
/// calling `observe` after every epoch.
pub fn train_until(
    state: &mut TrainState,
    data: &TrainData<'_>,
    cfg: &TrainConfig,
    until: usize,
    observe: &mut dyn FnMut(&TrainState, &EpochRecord),
) -> Result<()> {
    if state.bundle.num_params() != state.adam.len() {
        return Err(Error::Dimension("optimizer state does not match the networks".into()));
    }
    let until = until.min(cfg.schedule.total_epochs);
    while state.epoch < until {
        let rec = train_epoch(state, data, cfg)?;
        observe(state, &rec);
        if cfg.checkpoint_every > 0 && state.epoch.is_multiple_of(cfg.checkpoint_every) {
            if let Some(path) = &cfg.checkpoint_path {
                state.save(path)?;
            }
        }
    }
    Ok(())
}

/// Trains for the whole schedule.
pub fn train(state: &mut TrainState, data: &TrainData<'_>, cfg: &TrainConfig) -> Result<()> {
    train_until(state, data, cfg, cfg.schedule.total_epochs, &mut |_, _| {})
}
