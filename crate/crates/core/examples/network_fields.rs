//! Evaluates the hard-constrained fields of a freshly initialized network
//! bundle and shows the boundary conditions holding exactly.
//!
//! ```text
//! cargo run --example network_fields
//! ```

use pinn_topo::error::Result;
use pinn_topo::networks::{FieldBundle, FieldRole, TransformParams};
use pinn_topo::problem::{PhysicsKind, ProblemFamily};

fn main() -> Result<()> {
    let tp = TransformParams { load: 1.0, band: 0.1 };
    let bundle = FieldBundle::init(ProblemFamily::Matrix, PhysicsKind::LinearElastic, tp, &[50; 4], 10.0, 0)?;
    println!("{} networks, {} parameters", bundle.nets().len(), bundle.num_params());
    for (role, net) in bundle.nets() {
        println!("  {role:>5}: layers {:?}", net.layer_sizes());
    }

    println!("\nright side x1 = 0.5: s11 = load, s12 = 0, phi = band");
    for y in [-0.4, 0.0, 0.3] {
        let x = [0.5, y];
        let s11 = bundle.eval_constrained(FieldRole::S11, x)?;
        let s12 = bundle.eval_constrained(FieldRole::S12, x)?;
        let phi = bundle.eval_constrained(FieldRole::Phi, x)?;
        println!(
            "  x2 = {y:+.1}: s11 {:.15}  s12 {:+.1e}  phi {:.15}",
            s11.value, s12.value, phi.value
        );
    }

    println!("\ninterior values with their spatial derivatives");
    let v = bundle.eval_point([0.1, -0.2])?;
    for role in [FieldRole::U1, FieldRole::U2, FieldRole::Phi] {
        let d = v.get(role);
        println!(
            "  {role:>5}: {:+.6} (d/dx1 {:+.6}, d/dx2 {:+.6})",
            d.value, d.dx1, d.dx2
        );
    }
    Ok(())
}
