//! Collocation sampling, ADAM, level-set pretraining and the training loop.

mod optim;
mod pretrain;
mod restarts;
mod sampling;
mod trainer;

pub use optim::{Adam, Schedule};
pub use pretrain::{label_mae, levelset_label, pretrain_levelset, PretrainConfig, PretrainReport};
pub use restarts::{best_by_loss, fit, fit_restarts, NetSpec, RunSpec, SeedOutcome};
pub use sampling::{lhs_sample, CollocationSet, DEFAULT_BATCHES, DEFAULT_POINTS};
pub use trainer::{
    history_csv, train, train_epoch, train_step, train_until, write_history, EikonalPoints, EpochRecord, TrainConfig,
    TrainData, TrainState, DIVERGENCE_THRESHOLD,
};
