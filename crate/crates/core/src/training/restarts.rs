//! Complete runs: initialization, pretraining, training, and restarts over
//! several seeds.

use crate::error::Result;
use crate::networks::{FieldBundle, TransformParams};
use crate::problem::{PhysicsKind, ProblemFamily};

use super::pretrain::{pretrain_levelset, PretrainConfig, PretrainReport};
use super::trainer::{train_until, EpochRecord, TrainConfig, TrainData, TrainState};

/// Hidden layer widths and the first-layer frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct NetSpec {
    pub hidden: Vec<usize>,
    pub omega0: f64,
}

impl Default for NetSpec {
    fn default() -> Self {
        Self {
            hidden: vec![50; 4],
            omega0: 10.0,
        }
    }
}

impl NetSpec {
    /// Six hidden layers of 100 for the wide matrix, four of 50 otherwise.
    pub fn for_family(family: ProblemFamily) -> Self {
        match family {
            ProblemFamily::WideMatrix => Self {
                hidden: vec![100; 6],
                omega0: 10.0,
            },
            _ => Self::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunSpec {
    pub family: ProblemFamily,
    pub physics: PhysicsKind,
    pub transform: TransformParams,
    pub net: NetSpec,
    pub pretrain: PretrainConfig,
    pub train: TrainConfig,
}

impl RunSpec {
    pub fn init_bundle(&self, seed: u64) -> Result<FieldBundle> {
        FieldBundle::init(
            self.family,
            self.physics,
            self.transform,
            &self.net.hidden,
            self.net.omega0,
            seed,
        )
    }
}

/// Initializes with `seed`, pretrains the level set and trains to the end of
/// the schedule.
pub fn fit(
    spec: &RunSpec,
    data: &TrainData<'_>,
    seed: u64,
    observe: &mut dyn FnMut(&TrainState, &EpochRecord),
) -> Result<(PretrainReport, TrainState)> {
    let mut bundle = spec.init_bundle(seed)?;
    let report = pretrain_levelset(&mut bundle, data.collocation.points(), &spec.pretrain)?;
    let mut state = TrainState::new(bundle);
    train_until(&mut state, data, &spec.train, spec.train.schedule.total_epochs, observe)?;
    Ok((report, state))
}

/// Result of one restart.
#[derive(Debug)]
pub struct SeedOutcome {
    pub seed: u64,
    pub result: Result<(PretrainReport, TrainState)>,
}

/// Runs [`fit`] once per seed. Failed runs are kept as errors.
pub fn fit_restarts(
    spec: &RunSpec,
    data: &TrainData<'_>,
    seeds: &[u64],
    observe: &mut dyn FnMut(u64, &TrainState, &EpochRecord),
) -> Vec<SeedOutcome> {
    seeds
        .iter()
        .map(|&seed| SeedOutcome {
            seed,
            result: fit(spec, data, seed, &mut |s, r| observe(seed, s, r)),
        })
        .collect()
}

/// Successful restart with the lowest final total loss.
pub fn best_by_loss(outcomes: &[SeedOutcome]) -> Option<&SeedOutcome> {
    outcomes
        .iter()
        .filter_map(|o| {
            let (_, s) = o.result.as_ref().ok()?;
            Some((o, s.final_loss().unwrap_or(f64::INFINITY)))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(o, _)| o)
}
