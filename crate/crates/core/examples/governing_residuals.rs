//! Evaluates the governing-equation residuals of exact fields for the three
//! physics and shows how the density switches between the phases.
//!
//! ```text
//! cargo run --example governing_residuals
//! ```

use pinn_topo::autodiff::SpatialDual;
use pinn_topo::error::Result;
use pinn_topo::physics::{
    residual, HyperModel, HyperState, LinearInclusion, LinearModel, LinearState, MaterialModel, StateEval,
    ThermalInclusion, ThermalModel, ThermalState,
};

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn main() -> Result<()> {
    // Uniaxial plane-strain tension: s11 = 1, eps from the compliance.
    let (e, nu) = (1.0, 0.3);
    let eps11 = (1.0 - nu * nu) / e;
    let eps22 = -nu * (1.0 + nu) / e;
    let c = SpatialDual::constant;
    let state = StateEval::Linear(LinearState {
        u1: SpatialDual::new(0.0, eps11, 0.0),
        u2: SpatialDual::new(0.0, 0.0, eps22),
        s11: c(1.0),
        s22: c(0.0),
        s12: c(0.0),
    });
    let model = MaterialModel::Linear(LinearModel::new(e, nu, LinearInclusion::Void));
    for rho in [1.0, 0.5, 0.0] {
        let r = residual(&state, rho, &model)?;
        println!(
            "linear, rho {rho}: balance {:.1e}, constitutive {:.3e}",
            norm(&r.balance),
            norm(&r.constitutive)
        );
    }

    // Undeformed Neo-Hookean body: stress free when the pressure equals mu.
    let hyper = MaterialModel::Hyper(HyperModel {
        mu: 1.0,
        disp_scale: 0.1,
    });
    let rest = StateEval::Hyper(HyperState {
        u1: c(0.0),
        u2: c(0.0),
        s11: c(0.0),
        s22: c(0.0),
        s12: c(0.0),
        s21: c(0.0),
        p: c(1.0),
    });
    let r = residual(&rest, 1.0, &hyper)?;
    println!(
        "neo-hookean at rest: balance {:.1e}, constitutive {:.1e}, incompressibility {:.1e}",
        norm(&r.balance),
        norm(&r.constitutive),
        norm(&r.incompressibility)
    );

    // One-dimensional conduction with k(T) = 1 + T.
    let thermal = MaterialModel::Thermal(ThermalModel {
        k: 1.0,
        t0: 1.0,
        inclusion: ThermalInclusion::Insulating,
    });
    let x1: f64 = 0.1;
    let t = -1.0 + (1.0 + 3.0 * (0.5 - x1)).sqrt();
    let state = StateEval::Thermal(ThermalState {
        t: SpatialDual::new(t, -1.5 / (1.0 + t), 0.0),
        q1: c(1.5),
        q2: c(0.0),
    });
    let r = residual(&state, 1.0, &thermal)?;
    println!(
        "thermal: T({x1}) = {t:.6}, balance {:.1e}, fourier {:.1e}",
        norm(&r.balance),
        norm(&r.constitutive)
    );
    Ok(())
}
