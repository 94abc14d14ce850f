//! Generates the centered-void case, pretrains and trains two seeds on a
//! short schedule, and evaluates the recovered density against the truth.
//!
//! ```text
//! cargo run --example train_circle -- 300
//! ```
//!
//! The argument is the number of training epochs; the full schedule is
//! 30000. Outputs land in `$TMPDIR/train-circle`.

use pinn_topo::config::{DataConfig, KeyValues, RunConfig};
use pinn_topo::run::{generate_data, RunContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let epochs: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let dir = std::env::temp_dir().join("train-circle");
    std::fs::create_dir_all(&dir)?;

    let data = "case.catalog = circle\ncase.resolution = 100\noutput.dir = data\noutput.raster = 128\n";
    generate_data(&DataConfig::from_keys(&KeyValues::parse(data, "data")?, &dir)?)?;

    let run = format!(
        "case.file = data/case.txt\noutput.dir = run\noutput.raster = 128\n\
         train.epochs = {epochs}\ntrain.points = 2000\ntrain.seeds = 0, 1\n\
         net.hidden = 32, 32, 32\npretrain.epochs = 400\n"
    );
    let ctx = RunContext::new(&RunConfig::from_keys(&KeyValues::parse(&run, "run")?, &dir)?)?;
    for (seed, report) in ctx.train_all(&mut |m| println!("{m}")) {
        let r = report?;
        println!("seed {seed}: iou {:.4} after {} epochs", r.iou, r.epochs.unwrap_or(0));
    }
    println!("run directory: {}", ctx.config.output.display());
    Ok(())
}
