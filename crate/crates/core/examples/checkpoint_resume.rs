//! Trains for a few epochs, checkpoints, reloads and continues, then checks
//! that the result matches an uninterrupted run bit for bit.
//!
//! ```text
//! cargo run --example checkpoint_resume
//! ```

use pinn_topo::dataforge::{catalog, MeasurementLayout};
use pinn_topo::networks::{FieldBundle, TransformParams};
use pinn_topo::training::{train_until, CollocationSet, Schedule, TrainConfig, TrainData, TrainState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = catalog("circle")?;
    spec.resolution = 60;
    let sol = spec.solve()?;
    let meas = spec.measurements(&sol, &MeasurementLayout::for_family(spec.family)?.thinned(4)?)?;
    let model = spec.material_model()?;
    let colloc = CollocationSet::lhs(spec.family.domain(), 500, 10, 0)?;
    let data = TrainData {
        model: &model,
        measurements: &meas,
        collocation: &colloc,
    };
    let cfg = TrainConfig::new(Schedule::matrix());
    let tp = TransformParams { load: 1.0, band: 0.1 };
    let init = FieldBundle::init(spec.family, spec.physics(), tp, &[16, 16], 10.0, 3)?;

    let mut straight = TrainState::new(init.clone());
    train_until(&mut straight, &data, &cfg, 6, &mut |_, r| {
        println!(
            "epoch {:2}: L_meas {:.3e}  L_gov {:.3e}  total {:.3e}",
            r.epoch, r.meas, r.gov, r.total
        )
    })?;

    let path = std::env::temp_dir().join("checkpoint-resume.ckpt");
    let mut first = TrainState::new(init);
    train_until(&mut first, &data, &cfg, 3, &mut |_, _| {})?;
    first.save(&path)?;
    let mut resumed = TrainState::load(&path)?;
    train_until(&mut resumed, &data, &cfg, 6, &mut |_, _| {})?;

    let same = resumed == straight;
    println!(
        "checkpoint {} ({} bytes)",
        path.display(),
        std::fs::metadata(&path)?.len()
    );
    println!("resumed run identical to uninterrupted run: {same}");
    Ok(())
}
