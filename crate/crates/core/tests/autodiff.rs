//! Derivative invariants of the network fields and the tape.

use pinn_topo::autodiff::{Scalar, SpatialDual, Tape};
use pinn_topo::density::LevelSetDensity;
use pinn_topo::networks::{FieldBundle, FieldRole, TransformParams};
use pinn_topo::problem::{PhysicsKind, ProblemFamily};
use proptest::prelude::*;

const TP: TransformParams = TransformParams { load: 1.0, band: 0.1 };

fn bundle(seed: u64) -> FieldBundle {
    FieldBundle::init(
        ProblemFamily::Matrix,
        PhysicsKind::LinearElastic,
        TP,
        &[12, 12],
        10.0,
        seed,
    )
    .unwrap()
}

fn interior() -> impl Strategy<Value = [f64; 2]> {
    (-0.45..0.45f64, -0.45..0.45f64).prop_map(|(a, b)| [a, b])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spatial_duals_match_central_differences(seed in 0u64..1000, x in interior()) {
        let b = bundle(seed);
        let h = 1e-5;
        for role in [FieldRole::Phi, FieldRole::U1, FieldRole::S11, FieldRole::S12] {
            let d = b.eval_constrained(role, x).unwrap();
            let f = |p: [f64; 2]| b.eval_constrained(role, p).unwrap().value;
            let fd1 = (f([x[0] + h, x[1]]) - f([x[0] - h, x[1]])) / (2.0 * h);
            let fd2 = (f([x[0], x[1] + h]) - f([x[0], x[1] - h])) / (2.0 * h);
            let scale = d.dx1.hypot(d.dx2).max(1.0);
            prop_assert!((d.dx1 - fd1).hypot(d.dx2 - fd2) / scale < 1e-6, "{role}: {:?} vs {fd1}, {fd2}", d);
        }
    }

    #[test]
    fn parameter_gradients_are_linear(seed in 0u64..1000, a in -3.0..3.0f64, c in -3.0..3.0f64) {
        let b = bundle(seed);
        let pts = [[0.1, -0.2], [-0.3, 0.25], [0.4, 0.05]];
        let grad = |wa: f64, wc: f64| {
            let tape = Tape::new();
            let leaves = b.register(&tape);
            let f = b.eval_tape(&tape, &leaves, &pts, &[FieldRole::U1, FieldRole::S22], true).unwrap();
            let u = f.get(FieldRole::U1).dx1.square().mean();
            let s = f.get(FieldRole::S22).value.mean();
            tape.grad_params(u.scale(wa) + s.scale(wc), &leaves.flat()).unwrap()
        };
        let (gu, gs, gm) = (grad(1.0, 0.0), grad(0.0, 1.0), grad(a, c));
        for ((u, s), m) in gu.iter().zip(&gs).zip(&gm) {
            let lin = a * u + c * s;
            prop_assert!((lin - m).abs() <= 1e-12 * (1.0 + lin.abs()));
        }
    }

    #[test]
    fn density_chain_rule(phi in -1.0..1.0f64, g1 in -5.0..5.0f64, g2 in -5.0..5.0f64, delta in 0.005..0.1f64) {
        let d = LevelSetDensity::new(delta);
        let rho = d.density(SpatialDual::new(phi, g1, g2));
        let k = rho.value * (1.0 - rho.value) / delta;
        prop_assert!((rho.dx1 - k * g1).abs() <= 1e-12 * (1.0 + (k * g1).abs()));
        prop_assert!((rho.dx2 - k * g2).abs() <= 1e-12 * (1.0 + (k * g2).abs()));
    }

    #[test]
    fn same_seed_initializes_bit_identically(seed in any::<u64>()) {
        let bits = |b: FieldBundle| b.params_flat().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(bundle(seed)), bits(bundle(seed)));
        prop_assert_ne!(bits(bundle(seed)), bits(bundle(seed.wrapping_add(1))));
    }
}
