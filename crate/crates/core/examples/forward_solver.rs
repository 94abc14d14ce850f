//! Solves a plate with a circular hole under uniaxial tension and reports
//! the stress concentration at the hole crown.
//!
//! ```text
//! cargo run --example forward_solver
//! ```

use pinn_topo::dataforge::{solve_linear, ElasticPhase, ElasticProblem, Grid, ShapeSpec};
use pinn_topo::error::Result;
use pinn_topo::problem::{Rect, Side};

fn main() -> Result<()> {
    let hole = ShapeSpec::circle(0.0, 0.0, 0.1);
    let grid = Grid::new(Rect::new(-0.5, 0.5, -0.5, 0.5), 200)?;
    let mut problem = ElasticProblem::new(grid, |x| {
        if hole.contains(x) {
            ElasticPhase::Void
        } else {
            ElasticPhase::Solid { e: 1.0, nu: 0.3 }
        }
    });
    problem.traction(Side::Left, [-1.0, 0.0]);
    problem.traction(Side::Right, [1.0, 0.0]);
    problem.pin_corners();
    let sol = solve_linear(&problem)?;

    let g = sol.grid;
    let col = g.nx / 2;
    let crown = (g.ny / 2..g.ny)
        .map(|j| g.element(col, j))
        .find(|&e| matches!(sol.phases[e], ElasticPhase::Solid { .. }))
        .expect("solid element above the hole");
    let s = sol.stress(crown, [0.0, 0.0]).expect("solid element");
    let c = g.centroid(crown);
    println!("{} x {} elements", g.nx, g.ny);
    println!("s11 at ({:.4}, {:.4}) = {:.3} (infinite plate: 3)", c[0], c[1], s[0]);
    let u = sol.displacement_at([0.5, 0.0])?;
    println!("right-side displacement u1 = {:.5}", u[0]);
    Ok(())
}
