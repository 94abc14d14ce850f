//! Fits the level-set network to the initial guess, a disk of radius 0.25,
//! and prints the resulting density along a diameter.
//!
//! ```text
//! cargo run --example pretrain_level_set
//! ```

use pinn_topo::density::LevelSetDensity;
use pinn_topo::error::Result;
use pinn_topo::networks::{FieldBundle, TransformParams};
use pinn_topo::problem::{PhysicsKind, ProblemFamily};
use pinn_topo::training::{lhs_sample, pretrain_levelset, PretrainConfig};

fn main() -> Result<()> {
    let family = ProblemFamily::Matrix;
    let tp = TransformParams { load: 1.0, band: 0.1 };
    let mut bundle = FieldBundle::init(family, PhysicsKind::LinearElastic, tp, &[32, 32], 10.0, 0)?;
    let points = lhs_sample(family.domain(), 2000, 0)?;
    let report = pretrain_levelset(&mut bundle, &points, &PretrainConfig::default())?;
    for (epoch, l) in report.losses.iter().enumerate().step_by(100) {
        println!("epoch {epoch:4}: mean |phi - label| {l:.4}");
    }
    println!("final {:.4}", report.final_mae);

    let density = LevelSetDensity::new(0.01);
    let row: String = (0..41)
        .map(|i| {
            let x = -0.5 + i as f64 / 40.0;
            let rho = density
                .density_at(&bundle, [x, 0.0])
                .map(|d| d.value)
                .unwrap_or(f64::NAN);
            if rho < 0.5 {
                '.'
            } else {
                '#'
            }
        })
        .collect();
    println!("rho along x2 = 0: {row}");
    Ok(())
}
