//! Records a loss on the tape and checks its parameter gradient against a
//! central difference.
//!
//! ```text
//! cargo run --example autodiff_gradients
//! ```

use pinn_topo::autodiff::{Scalar, Tape};
use pinn_topo::error::Result;
use pinn_topo::networks::{FieldBundle, FieldRole, TransformParams};
use pinn_topo::problem::{PhysicsKind, ProblemFamily};

fn loss(bundle: &FieldBundle, points: &[[f64; 2]]) -> Result<(f64, Vec<f64>)> {
    let tape = Tape::new();
    let leaves = bundle.register(&tape);
    let f = bundle.eval_tape(&tape, &leaves, points, &[FieldRole::U1, FieldRole::Phi], true)?;
    let u = f.get(FieldRole::U1);
    let phi = f.get(FieldRole::Phi);
    let l = (u.dx1 + phi.value).square().mean() + phi.dx2.square().mean();
    Ok((l.item(), tape.grad_params(l, &leaves.flat())?))
}

fn main() -> Result<()> {
    let tp = TransformParams { load: 1.0, band: 0.1 };
    let mut bundle = FieldBundle::init(
        ProblemFamily::Matrix,
        PhysicsKind::LinearElastic,
        tp,
        &[16, 16],
        10.0,
        7,
    )?;
    let points = [[0.1, 0.2], [-0.3, 0.05], [0.25, -0.4]];
    let (value, grad) = loss(&bundle, &points)?;
    println!("loss {value:.6e} over {} parameters", grad.len());

    let params = bundle.params_flat();
    for i in [0, params.len() / 3, params.len() - 1] {
        let h = 1e-6 * params[i].abs().max(1.0);
        let mut at = |v: f64| -> Result<f64> {
            let mut p = params.clone();
            p[i] = v;
            bundle.set_params_flat(&p)?;
            Ok(loss(&bundle, &points)?.0)
        };
        let fd = (at(params[i] + h)? - at(params[i] - h)?) / (2.0 * h);
        println!("param {i:5}: tape {:+.9e}  central difference {fd:+.9e}", grad[i]);
    }
    Ok(())
}
