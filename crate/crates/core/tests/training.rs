//! Training-loop invariants: determinism, batching, divergence, pretraining.

use pinn_topo::dataforge::{catalog, CaseSpec, MeasurementLayout, MeasurementSet};
use pinn_topo::density::LevelSetDensity;
use pinn_topo::error::Error;
use pinn_topo::networks::{FieldBundle, TransformParams};
use pinn_topo::physics::MaterialModel;
use pinn_topo::problem::{PhysicsKind, ProblemFamily};
use pinn_topo::training::{
    lhs_sample, pretrain_levelset, train_until, CollocationSet, PretrainConfig, Schedule, TrainConfig, TrainData,
    TrainState,
};
use proptest::prelude::*;

const TP: TransformParams = TransformParams { load: 1.0, band: 0.1 };

struct Fixture {
    spec: CaseSpec,
    model: MaterialModel,
    meas: MeasurementSet,
    colloc: CollocationSet,
}

fn fixture() -> Fixture {
    let mut spec = catalog("circle").unwrap();
    spec.resolution = 60;
    let sol = spec.solve().unwrap();
    let layout = MeasurementLayout::for_family(spec.family).unwrap().thinned(5).unwrap();
    Fixture {
        meas: spec.measurements(&sol, &layout).unwrap(),
        model: spec.material_model().unwrap(),
        colloc: CollocationSet::lhs(spec.family.domain(), 300, 5, 2).unwrap(),
        spec,
    }
}

impl Fixture {
    fn data(&self) -> TrainData<'_> {
        TrainData {
            model: &self.model,
            measurements: &self.meas,
            collocation: &self.colloc,
        }
    }

    fn state(&self, seed: u64) -> TrainState {
        TrainState::new(FieldBundle::init(self.spec.family, self.spec.physics(), TP, &[12, 12], 10.0, seed).unwrap())
    }
}

#[test]
fn same_seed_gives_identical_history() {
    let f = fixture();
    let cfg = TrainConfig::new(Schedule::matrix());
    let run = |seed| {
        let mut s = f.state(seed);
        train_until(&mut s, &f.data(), &cfg, 3, &mut |_, _| {}).unwrap();
        s
    };
    let (a, b, c) = (run(5), run(5), run(6));
    assert_eq!(a.history.len(), 3);
    assert_eq!(a, b);
    assert_ne!(a.history, c.history);
}

#[test]
fn one_update_per_mini_batch() {
    let f = fixture();
    let cfg = TrainConfig::new(Schedule::matrix());
    let mut s = f.state(1);
    let mut steps = Vec::new();
    train_until(&mut s, &f.data(), &cfg, 3, &mut |st, _| steps.push(st.adam.steps())).unwrap();
    assert_eq!(steps, vec![5, 10, 15]);
}

#[test]
fn divergence_stops_training_and_saves_a_checkpoint() {
    let f = fixture();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("diverged.ckpt");
    let mut cfg = TrainConfig::new(Schedule::matrix());
    cfg.divergence_threshold = 1e-30;
    cfg.checkpoint_path = Some(path.clone());
    let mut s = f.state(1);
    let err = train_until(&mut s, &f.data(), &cfg, 5, &mut |_, _| {}).unwrap_err();
    assert!(matches!(err, Error::Diverged { epoch: 0, .. }), "{err}");
    assert_eq!(err.exit_code(), 1);
    let saved = TrainState::load(&path).unwrap();
    assert_eq!(saved, s);
}

#[test]
fn pretrained_level_set_is_a_centered_disk() {
    let family = ProblemFamily::Matrix;
    let mut b = FieldBundle::init(family, PhysicsKind::LinearElastic, TP, &[32, 32], 10.0, 0).unwrap();
    let pts = lhs_sample(family.domain(), 2000, 0).unwrap();
    let report = pretrain_levelset(&mut b, &pts, &PretrainConfig::default()).unwrap();
    assert!(report.final_mae < report.losses[0]);
    let density = LevelSetDensity::new(0.01);
    for k in 0..32 {
        let a = k as f64 * std::f64::consts::TAU / 32.0;
        let at = |r: f64| density.density_at(&b, [r * a.cos(), r * a.sin()]).unwrap().value;
        assert!(at(0.0) < 0.05, "centre density {}", at(0.0));
        assert!(at(0.18) < 0.5, "inside at angle {a}: {}", at(0.18));
        assert!(at(0.32) > 0.5, "outside at angle {a}: {}", at(0.32));
    }
}

proptest! {
    #[test]
    fn mini_batches_partition_the_points(n in 1usize..500, b in 1usize..40) {
        prop_assume!(b <= n);
        let pts: Vec<[f64; 2]> = (0..n).map(|i| [i as f64, 0.0]).collect();
        let c = CollocationSet::new(pts, b, 0).unwrap();
        prop_assert_eq!(c.num_batches(), b);
        let mut next = 0;
        let (mut lo, mut hi) = (usize::MAX, 0);
        for i in 0..b {
            let r = c.batch_indices(i);
            prop_assert_eq!(r.start, next);
            next = r.end;
            lo = lo.min(r.len());
            hi = hi.max(r.len());
        }
        prop_assert_eq!(next, n);
        prop_assert!(hi - lo <= 1);
    }
}
