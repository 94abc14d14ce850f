//! Scores density rasters against a ground truth with the IoU of their
//! low-density phases, and writes the rasters as CSV and PGM.
//!
//! ```text
//! cargo run --example iou_evaluation
//! ```

use pinn_topo::dataforge::catalog;
use pinn_topo::metrics::{iou, Raster};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = catalog("circle")?;
    let truth = spec.truth_raster(128, 128)?;
    let domain = spec.family.domain();
    println!("{:>28} {:>8}", "prediction", "iou");
    for (name, r, dx) in [
        ("exact", 0.15, 0.0),
        ("radius 0.13", 0.13, 0.0),
        ("radius 0.18", 0.18, 0.0),
        ("shifted by 0.05", 0.15, 0.05),
        ("initial guess, radius 0.25", 0.25, 0.0),
    ] {
        let pred = Raster::sample(
            domain,
            128,
            128,
            |x| if (x[0] - dx).hypot(x[1]) < r { 0.0 } else { 1.0 },
        )?;
        println!("{name:>28} {:>8.4}", iou(&pred, &truth, 0.5)?);
    }

    let dir = std::env::temp_dir().join("iou-evaluation");
    std::fs::create_dir_all(&dir)?;
    truth.save_csv(&dir.join("truth.csv"))?;
    std::fs::write(dir.join("truth.pgm"), truth.to_pgm(0.0, 1.0))?;
    let back = Raster::load_csv(&dir.join("truth.csv"))?;
    println!(
        "reloaded raster scores {:.4} against the original",
        iou(&back, &truth, 0.5)?
    );
    Ok(())
}
