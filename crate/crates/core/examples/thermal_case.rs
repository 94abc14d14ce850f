//! Solves the nonlinear conduction problem around an insulating slit and
//! prints the boundary data a network would be trained on.
//!
//! ```text
//! cargo run --example thermal_case
//! ```

use pinn_topo::dataforge::{catalog, CaseSolution, MeasurementLayout};
use pinn_topo::error::Result;
use pinn_topo::networks::FieldRole;

fn main() -> Result<()> {
    let mut spec = catalog("thermal-insulating")?;
    spec.resolution = 100;
    let sol = spec.solve()?;
    if let CaseSolution::Thermal(t) = &sol {
        println!("{} Picard iterations, residual {:.1e}", t.iterations, t.residual);
        for x in [-0.25, 0.0, 0.25] {
            println!("T({x:+.2}, 0.3) = {:.5}", t.temperature_at([x, 0.3])?);
        }
    }
    let layout = MeasurementLayout::for_family(spec.family)?.thinned(20)?;
    let m = spec.measurements(&sol, &layout)?;
    let cols: Vec<_> = [FieldRole::Temperature, FieldRole::Q1, FieldRole::Q2]
        .into_iter()
        .map(|r| m.column(r).expect("thermal column"))
        .collect();
    println!("{:>7} {:>7} {:>9} {:>9} {:>9}", "x1", "x2", "T", "q1", "q2");
    for (i, p) in m.points().iter().enumerate() {
        println!(
            "{:>7.3} {:>7.3} {:>9.4} {:>9.4} {:>9.4}",
            p[0], p[1], cols[0][i], cols[1][i], cols[2][i]
        );
    }
    Ok(())
}
