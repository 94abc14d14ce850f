//! Maps a level set to a density and measures the eikonal residual of an
//! exact signed distance function and of a stretched one.
//!
//! ```text
//! cargo run --example level_set_density
//! ```

use pinn_topo::autodiff::SpatialDual;
use pinn_topo::density::{eikonal_residual, LevelSetDensity};

/// Signed distance to a circle of radius `r` and its gradient, scaled by `k`.
fn circle(x: [f64; 2], r: f64, k: f64) -> SpatialDual<f64> {
    let d = x[0].hypot(x[1]);
    SpatialDual::new(k * (d - r), k * x[0] / d, k * x[1] / d)
}

fn main() {
    let density = LevelSetDensity::new(0.01);
    println!("{:>6} {:>10} {:>10} {:>8}", "r", "phi", "rho", "band");
    for r in [0.05, 0.2, 0.245, 0.25, 0.255, 0.3, 0.45] {
        let phi = circle([r, 0.0], 0.25, 1.0);
        let rho = density.density(phi);
        println!(
            "{r:>6.3} {:>+10.4} {:>10.6} {:>8}",
            phi.value,
            rho.value,
            density.in_band(phi.value)
        );
    }

    for k in [1.0, 1.5] {
        let mean = (1..100)
            .map(|i| {
                let t = i as f64 * 0.0628;
                eikonal_residual(circle([0.3 * t.cos(), 0.3 * t.sin()], 0.25, k))
            })
            .sum::<f64>()
            / 99.0;
        println!("gradient scale {k}: mean eikonal residual {mean:.3e}");
    }
}
