//! Builds a catalog case, solves it and writes the case file, the boundary
//! measurements and the ground-truth raster.
//!
//! ```text
//! cargo run --example generate_case -- 4 /tmp/case-4
//! ```

use std::path::PathBuf;

use pinn_topo::dataforge::{catalog, generate_case, MeasurementLayout};
use pinn_topo::error::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "circle".into());
    let dir: PathBuf = args
        .next()
        .map_or_else(|| std::env::temp_dir().join(format!("case-{id}")), PathBuf::from);

    let spec = catalog(&id)?;
    let layout = MeasurementLayout::for_family(spec.family)?.with_noise(0.001, 1)?;
    let case = generate_case(&spec, &layout, 128, &dir)?;
    let m = case.load_measurements()?;
    println!("{}: {}", spec.id, spec.description);
    println!("fem {}", case.fem);
    println!("{} measurement points, columns {:?}", m.len(), m.roles());
    println!("written to {}", dir.display());
    Ok(())
}
