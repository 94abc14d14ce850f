//! Runs a small regularizer comparison on the centered-void case: every
//! regularizer at two weights and SIMP at two exponents, two seeds each.
//!
//! ```text
//! cargo run --example regularizer_sweep -- 100
//! ```

use pinn_topo::config::{DataConfig, KeyValues, RunConfig};
use pinn_topo::metrics::{best_per_setting, SweepRow};
use pinn_topo::run::{compare_regularizers, generate_data, sweep_settings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let epochs: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20);
    let dir = std::env::temp_dir().join("regularizer-sweep");
    std::fs::create_dir_all(&dir)?;
    let data = "case.catalog = circle\ncase.resolution = 80\noutput.dir = data\noutput.raster = 64\n";
    generate_data(&DataConfig::from_keys(&KeyValues::parse(data, "data")?, &dir)?)?;
    let run = format!(
        "case.file = data/case.txt\noutput.dir = run\noutput.raster = 64\n\
         train.epochs = {epochs}\ntrain.points = 1000\ntrain.seeds = 0, 1\n\
         net.hidden = 16, 16\npretrain.epochs = 200\n"
    );
    let cfg = RunConfig::from_keys(&KeyValues::parse(&run, "run")?, &dir)?;

    let settings = sweep_settings(&["eikonal", "tvd", "penalization", "simp"], &[0.1, 1.0], &[1.0, 3.0])?;
    println!("{}", SweepRow::HEADER);
    let rows = compare_regularizers(&cfg, &settings, &mut |_| {}, &mut |r| println!("{}", r.to_csv_line()))?;
    println!();
    for (name, weight, best) in best_per_setting(&rows) {
        println!("{name:>12} {weight:>5}: best iou {best:.4}");
    }
    Ok(())
}
