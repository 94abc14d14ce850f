//! Invariants of the measurement loss, IoU and the raster and measurement files.

use pinn_topo::autodiff::Tape;
use pinn_topo::dataforge::MeasurementSet;
use pinn_topo::losses::loss_meas;
use pinn_topo::metrics::{iou, iou_masks, Raster};
use pinn_topo::networks::{FieldBundle, FieldRole, TransformParams};
use pinn_topo::problem::{PhysicsKind, ProblemFamily, Rect};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn square() -> Rect {
    Rect::new(-0.5, 0.5, -0.5, 0.5)
}

fn raster() -> impl Strategy<Value = Raster> {
    (1usize..12, 1usize..12).prop_flat_map(|(nx, ny)| {
        prop::collection::vec(-2.0..2.0f64, nx * ny).prop_map(move |d| Raster::new(square(), nx, ny, d).unwrap())
    })
}

fn masks() -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
    (1usize..200).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(any::<bool>(), n),
        )
    })
}

/// Boundary points of the unit square with `u1` and `u2` values, some missing.
fn measurements() -> impl Strategy<Value = MeasurementSet> {
    prop::collection::vec(
        (
            0..4usize,
            -0.5..0.5f64,
            -1.0..1.0f64,
            prop::option::weighted(0.8, -1.0..1.0f64),
        ),
        2..40,
    )
    .prop_map(|rows| {
        let mut points = Vec::new();
        let mut values = Vec::new();
        for (side, s, u1, u2) in rows {
            points.push(match side {
                0 => [-0.5, s],
                1 => [0.5, s],
                2 => [s, -0.5],
                _ => [s, 0.5],
            });
            values.extend([u1, u2.unwrap_or(f64::NAN)]);
        }
        MeasurementSet::new(points, vec![FieldRole::U1, FieldRole::U2], values).unwrap()
    })
}

/// A measurement set with a random permutation of its points.
fn shuffled() -> impl Strategy<Value = (MeasurementSet, Vec<usize>)> {
    measurements().prop_flat_map(|m| {
        let order = Just((0..m.len()).collect::<Vec<_>>()).prop_shuffle();
        (Just(m), order)
    })
}

fn meas_value(bundle: &FieldBundle, m: &MeasurementSet) -> f64 {
    let tape = Tape::new();
    let leaves = bundle.register(&tape);
    loss_meas(&tape, &leaves, bundle, m).unwrap().item()
}

proptest! {
    #[test]
    fn iou_is_symmetric((a, b) in masks()) {
        prop_assert_eq!(iou_masks(&a, &b).unwrap(), iou_masks(&b, &a).unwrap());
    }

    #[test]
    fn iou_of_a_mask_with_itself_is_one((a, _) in masks()) {
        prop_assert_eq!(iou_masks(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn iou_ignores_raster_row_order(a in raster(), seed in any::<u64>(), t in -1.0..1.0f64) {
        let b = Raster::new(a.domain, a.nx, a.ny, a.data.iter().rev().map(|v| v * ((seed % 3) as f64 + 0.5)).collect()).unwrap();
        prop_assert_eq!(iou(&a, &b, t).unwrap(), iou(&a.flipped(), &b.flipped(), t).unwrap());
        prop_assert_eq!(iou(&a, &b, t).unwrap(), iou(&b, &a, t).unwrap());
    }

    #[test]
    fn raster_csv_round_trips(a in raster()) {
        let back = Raster::from_csv(&a.to_csv(), "mem").unwrap();
        prop_assert_eq!((back.nx, back.ny), (a.nx, a.ny));
        for (x, y) in a.data.iter().zip(&back.data) {
            prop_assert!((x - y).abs() <= 1e-15 * x.abs().max(1.0));
        }
    }

    #[test]
    fn measurement_csv_round_trips(m in measurements()) {
        let back = MeasurementSet::from_csv(&m.to_csv(), "mem").unwrap();
        prop_assert_eq!(back.points(), m.points());
        let bits = |s: &MeasurementSet| s.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&back), bits(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn measurement_loss_ignores_point_order((m, idx) in shuffled(), seed in 0u64..50) {
        let bundle = FieldBundle::init(
            ProblemFamily::Matrix,
            PhysicsKind::LinearElastic,
            TransformParams { load: 1.0, band: 0.1 },
            &[8, 8],
            10.0,
            seed,
        )
        .unwrap();
        let a = meas_value(&bundle, &m);
        let b = meas_value(&bundle, &m.permuted(&idx));
        prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300), "{a} vs {b}");
    }

    #[test]
    fn measurement_loss_of_a_subset_of_roles_is_partial(m in measurements(), keep in subsequence(vec![FieldRole::U1, FieldRole::U2], 1)) {
        let bundle = FieldBundle::init(
            ProblemFamily::Matrix,
            PhysicsKind::LinearElastic,
            TransformParams { load: 1.0, band: 0.1 },
            &[8],
            10.0,
            1,
        )
        .unwrap();
        let all = meas_value(&bundle, &m);
        let part = meas_value(&bundle, &m.select(&keep).unwrap());
        prop_assert!(part <= all * (1.0 + 1e-12));
    }
}
