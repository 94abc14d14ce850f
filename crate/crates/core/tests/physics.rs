//! Structural invariants of the governing-equation residuals.

use pinn_topo::autodiff::SpatialDual;
use pinn_topo::physics::{
    residual, HyperModel, HyperState, LinearInclusion, LinearModel, LinearState, MaterialModel, StateEval,
    ThermalInclusion, ThermalModel, ThermalState,
};
use proptest::prelude::*;

fn dual() -> impl Strategy<Value = SpatialDual<f64>> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(v, a, b)| SpatialDual::new(v, a, b))
}

fn linear_state() -> impl Strategy<Value = LinearState<f64>> {
    (dual(), dual(), dual(), dual(), dual()).prop_map(|(u1, u2, s11, s22, s12)| LinearState { u1, u2, s11, s22, s12 })
}

fn hyper_state() -> impl Strategy<Value = HyperState<f64>> {
    (linear_state(), dual(), dual()).prop_map(|(l, s21, p)| HyperState {
        u1: l.u1,
        u2: l.u2,
        s11: l.s11,
        s22: l.s22,
        s12: l.s12,
        s21,
        p,
    })
}

fn thermal_state() -> impl Strategy<Value = ThermalState<f64>> {
    (0.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, dual(), dual()).prop_map(|(t, a, b, q1, q2)| ThermalState {
        t: SpatialDual::new(t, a, b),
        q1,
        q2,
    })
}

fn linear_models() -> Vec<MaterialModel> {
    [
        LinearInclusion::Void,
        LinearInclusion::Elastic { e: 0.2, nu: 0.3 },
        LinearInclusion::Elastic { e: 5.0, nu: 0.25 },
        LinearInclusion::Rigid,
    ]
    .into_iter()
    .map(|i| MaterialModel::Linear(LinearModel::new(1.0, 0.3, i)))
    .collect()
}

fn thermal_models() -> Vec<MaterialModel> {
    [ThermalInclusion::Insulating, ThermalInclusion::Conducting]
        .into_iter()
        .map(|inclusion| {
            MaterialModel::Thermal(ThermalModel {
                k: 1.0,
                t0: 1.0,
                inclusion,
            })
        })
        .collect()
}

const HYPER: MaterialModel = MaterialModel::Hyper(HyperModel {
    mu: 1.9,
    disp_scale: 0.17,
});

/// All residual components of `state` at density `rho`.
fn components(state: &StateEval<f64>, rho: f64, model: &MaterialModel) -> Vec<f64> {
    let r = residual(state, rho, model).unwrap();
    [r.balance, r.constitutive, r.incompressibility].concat()
}

/// `r(rho) = (1 - rho) r(0) + rho r(1)` componentwise.
fn assert_affine(state: &StateEval<f64>, rho: f64, model: &MaterialModel) -> Result<(), TestCaseError> {
    let (r0, r1, r) = (
        components(state, 0.0, model),
        components(state, 1.0, model),
        components(state, rho, model),
    );
    for ((a, b), v) in r0.iter().zip(&r1).zip(&r) {
        let lin = (1.0 - rho) * a + rho * b;
        prop_assert!(
            (v - lin).abs() <= 1e-12 * (1.0 + a.abs() + b.abs()),
            "{model:?}: {v} vs {lin}"
        );
    }
    Ok(())
}

proptest! {
    #[test]
    fn linear_residual_is_affine_in_density(s in linear_state(), rho in 0.0..1.0f64) {
        for m in linear_models() {
            assert_affine(&StateEval::Linear(s), rho, &m)?;
        }
    }

    #[test]
    fn hyperelastic_residual_is_affine_in_density(s in hyper_state(), rho in 0.0..1.0f64) {
        assert_affine(&StateEval::Hyper(s), rho, &HYPER)?;
    }

    #[test]
    fn thermal_residual_is_affine_in_density(s in thermal_state(), rho in 0.0..1.0f64) {
        for m in thermal_models() {
            assert_affine(&StateEval::Thermal(s), rho, &m)?;
        }
    }

    #[test]
    fn simp_with_unit_exponent_is_the_plain_law(s in linear_state(), rho in 0.0..1.0f64) {
        for m in linear_models() {
            let state = StateEval::Linear(s);
            let simp = m.with_simp(Some(1.0)).unwrap();
            prop_assert_eq!(components(&state, rho, &m), components(&state, rho, &simp));
        }
    }

    #[test]
    fn residuals_ignore_rigid_translation(s in hyper_state(), c1 in -5.0..5.0f64, c2 in -5.0..5.0f64, rho in 0.0..1.0f64) {
        let shift = |u: SpatialDual<f64>, c: f64| SpatialDual::new(u.value + c, u.dx1, u.dx2);
        let moved = HyperState { u1: shift(s.u1, c1), u2: shift(s.u2, c2), ..s };
        prop_assert_eq!(components(&StateEval::Hyper(s), rho, &HYPER), components(&StateEval::Hyper(moved), rho, &HYPER));
        let lin = LinearState { u1: s.u1, u2: s.u2, s11: s.s11, s22: s.s22, s12: s.s12 };
        let lin_moved = LinearState { u1: moved.u1, u2: moved.u2, ..lin };
        for m in linear_models() {
            prop_assert_eq!(components(&StateEval::Linear(lin), rho, &m), components(&StateEval::Linear(lin_moved), rho, &m));
        }
    }

    #[test]
    fn linear_residual_ignores_infinitesimal_rotation(s in linear_state(), w in -1.0..1.0f64, rho in 0.0..1.0f64) {
        let rotated = LinearState {
            u1: SpatialDual::new(s.u1.value, s.u1.dx1, s.u1.dx2 - w),
            u2: SpatialDual::new(s.u2.value, s.u2.dx1 + w, s.u2.dx2),
            ..s
        };
        for m in linear_models() {
            let a = components(&StateEval::Linear(s), rho, &m);
            let b = components(&StateEval::Linear(rotated), rho, &m);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-13 * (1.0 + x.abs()));
            }
        }
    }
}
