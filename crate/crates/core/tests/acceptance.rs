//! Acceptance criteria, one test and one `PASS`/`FAIL`/`SKIP` line each.
//!
//! The long training criteria (5 and 6) run only with
//! `PINNTO_ACCEPTANCE_FULL=1`; otherwise they report `SKIP`.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use pinn_topo::autodiff::{SpatialDual, Tape};
use pinn_topo::config::{KeyValues, RunConfig};
use pinn_topo::dataforge::{
    catalog, generate_case, solve_linear, solve_thermal, ElasticPhase, ElasticProblem, Grid, MeasurementLayout,
    MeasurementSet, ThermalPhase, ThermalProblem,
};
use pinn_topo::density::{eikonal_residual, LevelSetDensity};
use pinn_topo::losses::{total_loss, LossContext, LossWeights, Regularizer, RegularizerInput};
use pinn_topo::networks::{FieldBundle, FieldRole, TransformParams};
use pinn_topo::physics::{
    residual, HyperModel, LinearInclusion, LinearModel, MaterialModel, StateEval, ThermalInclusion, ThermalModel,
    ThermalState,
};
use pinn_topo::problem::{PhysicsKind, ProblemFamily, Rect, Side};
use pinn_topo::run::{sweep_settings, RunContext};
use pinn_topo::training::{
    label_mae, lhs_sample, pretrain_levelset, train_until, CollocationSet, PretrainConfig, Schedule, TrainConfig,
    TrainData, TrainState, DEFAULT_BATCHES, DEFAULT_POINTS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FULL_ENV: &str = "PINNTO_ACCEPTANCE_FULL";

fn report(n: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n}: {verdict} {detail}").unwrap();
    out.flush().unwrap();
}

fn skip(n: u32, detail: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n}: SKIP {detail} (set {FULL_ENV}=1)").unwrap();
}

fn full_run() -> bool {
    std::env::var(FULL_ENV).is_ok_and(|v| v == "1")
}

// ---------------------------------------------------------------- 1

struct GradCase {
    bundle: FieldBundle,
    model: MaterialModel,
    weights: LossWeights,
    meas: MeasurementSet,
    batch: Vec<[f64; 2]>,
    band: Vec<bool>,
}

impl GradCase {
    fn random(physics: PhysicsKind, rng: &mut ChaCha8Rng) -> Self {
        let family = match physics {
            PhysicsKind::Thermal => ProblemFamily::Thermal {
                missing: Some(Side::Top),
            },
            _ if rng.random_bool(0.3) => ProblemFamily::Layer,
            _ => ProblemFamily::Matrix,
        };
        let family = if physics == PhysicsKind::NeoHookean {
            ProblemFamily::Matrix
        } else {
            family
        };
        let depth = rng.random_range(1..=3);
        let hidden: Vec<usize> = (0..depth).map(|_| rng.random_range(3..=12)).collect();
        let omega0 = rng.random_range(2.0..12.0);
        let tp = TransformParams { load: 1.0, band: 0.1 };
        let bundle = FieldBundle::init(family, physics, tp, &hidden, omega0, rng.random()).unwrap();
        let model = match physics {
            PhysicsKind::LinearElastic => {
                let inclusion = match rng.random_range(0..3) {
                    0 => LinearInclusion::Void,
                    1 => LinearInclusion::Rigid,
                    _ => LinearInclusion::Elastic { e: 0.3, nu: 0.25 },
                };
                MaterialModel::Linear(LinearModel::new(1.0, 0.3, inclusion))
            }
            PhysicsKind::NeoHookean => MaterialModel::Hyper(HyperModel {
                mu: 1.0 / (3.0 * 0.173),
                disp_scale: 0.173,
            }),
            PhysicsKind::Thermal => MaterialModel::Thermal(ThermalModel {
                k: 1.0,
                t0: 1.0,
                inclusion: if rng.random_bool(0.5) {
                    ThermalInclusion::Insulating
                } else {
                    ThermalInclusion::Conducting
                },
            }),
        };
        let regularizer = match (physics, rng.random_range(0..4)) {
            (_, 0) => Regularizer::Tvd,
            (_, 1) => Regularizer::Penalization,
            (PhysicsKind::LinearElastic, 2) => Regularizer::Simp(3.0),
            _ => Regularizer::Eikonal,
        };
        let weights = LossWeights {
            regularizer,
            ..LossWeights::default()
        };
        let domain = family.domain();
        let batch = lhs_sample(domain, 12, rng.random()).unwrap();
        let sides: Vec<Side> = match family {
            ProblemFamily::Layer => vec![Side::Top],
            f => f.known_sides(),
        };
        let layout = MeasurementLayout::uniform(domain, 2, &sides).unwrap();
        let roles = match physics {
            PhysicsKind::Thermal => vec![FieldRole::Temperature, FieldRole::Q1, FieldRole::Q2],
            _ => vec![FieldRole::U1, FieldRole::U2],
        };
        let values = (0..layout.points.len() * roles.len())
            .map(|i| {
                if physics == PhysicsKind::Thermal && i % 3 == 2 {
                    f64::NAN
                } else {
                    rng.random_range(-1.0..1.0)
                }
            })
            .collect();
        let meas = MeasurementSet::new(layout.points, roles, values).unwrap();
        let phi = bundle.eval_values(FieldRole::Phi, &batch).unwrap();
        let mut band = LevelSetDensity::default().narrow_band_mask(&phi);
        if !band.iter().any(|&b| b) {
            band.iter_mut().for_each(|b| *b = true);
        }
        Self {
            bundle,
            model,
            weights,
            meas,
            batch,
            band,
        }
    }

    fn loss_and_grad(&self, params: &[f64], grad: bool) -> (f64, Vec<f64>, usize) {
        let mut b = self.bundle.clone();
        b.set_params_flat(params).unwrap();
        let density = LevelSetDensity::default();
        let ctx = LossContext {
            model: &self.model,
            density: &density,
            weights: &self.weights,
            measurements: &self.meas,
        };
        let tape = Tape::new();
        let leaves = b.register(&tape);
        let reg = RegularizerInput {
            points: &self.batch,
            fixed_band: Some(&self.band),
        };
        let l = total_loss(&tape, &leaves, &b, &ctx, &self.batch, reg).unwrap();
        let g = if grad {
            tape.grad_params(l.total, &leaves.flat()).unwrap()
        } else {
            Vec::new()
        };
        (l.total.item(), g, l.degenerate)
    }
}

#[test]
fn criterion_1_gradients_match_finite_differences() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for physics in [
        PhysicsKind::LinearElastic,
        PhysicsKind::NeoHookean,
        PhysicsKind::Thermal,
    ] {
        let mut configs = 0;
        while configs < 100 {
            let case = GradCase::random(physics, &mut rng);
            let p0 = case.bundle.params_flat();
            let (_, g, degenerate) = case.loss_and_grad(&p0, true);
            if degenerate > 0 {
                // The determinant guard is not differentiable; draw again.
                continue;
            }
            configs += 1;
            let coords: Vec<usize> = (0..6).map(|_| rng.random_range(0..p0.len())).collect();
            let (mut num, mut den) = (0.0, 0.0);
            for &i in &coords {
                // Fourth-order central stencil; the hyperelastic losses are
                // stiff enough that second order leaves visible truncation error.
                let h = 1e-5 * p0[i].abs().max(1.0);
                let at = |k: f64| {
                    let mut p = p0.clone();
                    p[i] = p0[i] + k * h;
                    case.loss_and_grad(&p, false).0
                };
                let fd = (at(-2.0) - 8.0 * at(-1.0) + 8.0 * at(1.0) - at(2.0)) / (12.0 * h);
                num += (g[i] - fd).powi(2);
                den += fd * fd;
            }
            let rel = num.sqrt() / den.sqrt().max(1e-8);
            worst = worst.max(rel);
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst <= 1e-6 && secs <= 300.0;
    report(
        1,
        pass,
        &format!("{checked} configurations, worst relative error {worst:.2e} (<= 1e-6), {secs:.1} s (<= 300 s)"),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 2

#[test]
fn criterion_2_hard_constraints_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tp = TransformParams { load: 1.0, band: 0.1 };
    let mut worst: f64 = 0.0;
    let mut check = |v: f64, target: f64| worst = worst.max((v - target).abs());

    for physics in [PhysicsKind::LinearElastic, PhysicsKind::NeoHookean] {
        let b = FieldBundle::init(ProblemFamily::Matrix, physics, tp, &[20, 20], 10.0, 5).unwrap();
        for _ in 0..1000 {
            let s = rng.random_range(-0.5..=0.5);
            let side = Side::ALL[rng.random_range(0..4)];
            let x = match side {
                Side::Left => [-0.5, s],
                Side::Right => [0.5, s],
                Side::Bottom => [s, -0.5],
                Side::Top => [s, 0.5],
            };
            let f = b.eval_point(x).unwrap();
            let v = |r: FieldRole| f.get(r).value;
            check(v(FieldRole::Phi), tp.band);
            match side {
                Side::Left | Side::Right => {
                    check(v(FieldRole::S11), tp.load);
                    let shear = if physics == PhysicsKind::NeoHookean {
                        FieldRole::S21
                    } else {
                        FieldRole::S12
                    };
                    check(v(shear), 0.0);
                }
                Side::Bottom | Side::Top => {
                    check(v(FieldRole::S22), 0.0);
                    check(v(FieldRole::S12), 0.0);
                }
            }
        }
    }

    let b = FieldBundle::init(ProblemFamily::Layer, PhysicsKind::LinearElastic, tp, &[20, 20], 10.0, 9).unwrap();
    for _ in 0..1000 {
        let s: f64 = rng.random_range(0.0..=1.0);
        let bottom = b.eval_point([s, -0.5]).unwrap();
        check(bottom.get(FieldRole::U1).value, 0.0);
        check(bottom.get(FieldRole::U2).value, 0.0);
        check(bottom.get(FieldRole::Phi).value, -tp.band);
        let top = b.eval_point([s, 0.0]).unwrap();
        check(top.get(FieldRole::S22).value, -tp.load);
        check(top.get(FieldRole::S12).value, 0.0);
        check(top.get(FieldRole::Phi).value, tp.band);
        let y: f64 = rng.random_range(-0.5..=0.0);
        let (l, r) = (b.eval_point([0.0, y]).unwrap(), b.eval_point([1.0, y]).unwrap());
        for role in [
            FieldRole::U1,
            FieldRole::U2,
            FieldRole::S11,
            FieldRole::S22,
            FieldRole::S12,
            FieldRole::Phi,
        ] {
            let (a, c) = (l.get(role), r.get(role));
            check(a.value, c.value);
            check(a.dx1, c.dx1);
            check(a.dx2, c.dx2);
        }
    }
    let pass = worst <= 1e-12;
    report(
        2,
        pass,
        &format!("max boundary and periodicity deviation {worst:.2e} (<= 1e-12)"),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 3

#[test]
fn criterion_3_eikonal_machinery() {
    let d = LevelSetDensity::new(0.01);
    let pts = lhs_sample(Rect::new(-0.5, 0.5, -0.5, 0.5), 20_000, 3).unwrap();
    let sdf = |p: [f64; 2]| {
        let (x, y) = (SpatialDual::seed_x1(p[0]), SpatialDual::seed_x2(p[1]));
        (x.square() + y.square()).sqrt() - 0.25
    };
    let band: Vec<f64> = pts
        .iter()
        .map(|&p| sdf(p))
        .filter(|phi| d.in_band(phi.value))
        .map(eikonal_residual)
        .collect();
    let circle = band.iter().sum::<f64>() / band.len() as f64;
    let plane_pts: Vec<f64> = pts
        .iter()
        .map(|&p| SpatialDual::seed_x1(p[0]) * 2.0)
        .filter(|phi| d.in_band(phi.value))
        .map(eikonal_residual)
        .collect();
    let plane = plane_pts.iter().sum::<f64>() / plane_pts.len() as f64;
    let edge = d.density(SpatialDual::constant(0.5 * d.band)).value;
    let pass = circle <= 1e-20 && plane == 1.0 && (edge - 0.993307).abs() <= 1e-6 && !band.is_empty();
    report(
        3,
        pass,
        &format!(
            "circle band loss {circle:.1e} over {} points (<= 1e-20), plane loss {plane} (= 1), band-edge rho {edge:.7} (0.993307 +- 1e-6)",
            band.len()
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 4

#[test]
fn criterion_4_forward_solver_fidelity() {
    let solid = ElasticPhase::Solid { e: 1.0, nu: 0.3 };
    let pulled = |phase: &dyn Fn([f64; 2]) -> ElasticPhase| {
        let g = Grid::new(Rect::new(-0.5, 0.5, -0.5, 0.5), 200).unwrap();
        let mut p = ElasticProblem::new(g, phase);
        p.traction(Side::Left, [-0.01, 0.0]);
        p.traction(Side::Right, [0.01, 0.0]);
        p.pin_corners();
        p
    };
    let plate = solve_linear(&pulled(&|_| solid)).unwrap();
    let mut strain_err: f64 = 0.0;
    for e in (0..plate.grid.num_elements()).step_by(997) {
        let s = plate.strain(e, [0.0, 0.0]);
        strain_err = strain_err.max((s[0] - 0.0091).abs()).max((s[1] + 0.0039).abs());
    }

    let r = 0.1;
    let holed = solve_linear(&pulled(&|x| {
        if x[0].hypot(x[1]) < r {
            ElasticPhase::Void
        } else {
            solid
        }
    }))
    .unwrap();
    let g = holed.grid;
    let i = g.nx / 2;
    let crown = (0..g.ny)
        .map(|j| g.element(i, j))
        .find(|&e| g.centroid(e)[1] > 0.0 && matches!(holed.phases[e], ElasticPhase::Solid { .. }))
        .unwrap();
    let factor = holed.stress(crown, [0.0, 0.0]).unwrap()[0] / 0.01;
    let pass = strain_err <= 1e-10 && (factor - 3.0).abs() <= 0.3;
    report(
        4,
        pass,
        &format!(
            "homogeneous strain error {strain_err:.1e} (<= 1e-10), hole crown stress factor {factor:.3} (3 +- 10%)"
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 5 and 6

const DESK_EPOCHS: usize = 30_000;
const DESK_POINTS: usize = 5_000;
const DESK_SEEDS: u64 = 4;

fn desk_config(dir: &Path) -> RunConfig {
    let case_dir = dir.join("circle");
    if !case_dir.join("case.txt").exists() {
        let spec = catalog("circle").unwrap();
        let layout = MeasurementLayout::for_family(spec.family).unwrap();
        generate_case(&spec, &layout, 512, &case_dir).unwrap();
    }
    let text = format!(
        "case.file = circle/case.txt\noutput.dir = runs\ntrain.epochs = {DESK_EPOCHS}\ntrain.points = {DESK_POINTS}\n\
         train.seeds = {}\ntrain.checkpoint_every = 500\n",
        (0..DESK_SEEDS).map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
    );
    RunConfig::from_keys(&KeyValues::parse(&text, "desk").unwrap(), dir).unwrap()
}

fn desk_dir() -> std::path::PathBuf {
    let d = std::env::var_os("PINNTO_ACCEPTANCE_DIR")
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("pinn-topo-acceptance"));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn best_iou(cfg: &RunConfig, log: &mut dyn FnMut(&str)) -> f64 {
    let ctx = RunContext::new(cfg).unwrap();
    ctx.train_all(log)
        .into_iter()
        .filter_map(|(_, r)| r.ok().map(|r| r.iou))
        .fold(f64::NAN, f64::max)
}

#[test]
fn criterion_5_desk_scale_detection() {
    if !full_run() {
        skip(5, "desk-scale circle detection, 4 seeds x 30k epochs");
        return;
    }
    let start = Instant::now();
    let cfg = desk_config(&desk_dir());
    let best = best_iou(&cfg, &mut |m| eprintln!("{m}"));
    let hours = start.elapsed().as_secs_f64() / 3600.0;
    let pass = best >= 0.80;
    report(
        5,
        pass,
        &format!("best-seed IoU {best:.4} (>= 0.80), {hours:.2} h (target <= 4 h)"),
    );
    assert!(pass);
}

#[test]
fn criterion_6_regularizer_ranking() {
    if !full_run() {
        skip(6, "regularizer sweep on the desk-scale case");
        return;
    }
    let base = desk_config(&desk_dir());
    let settings = sweep_settings(
        &["eikonal", "tvd", "penalization", "simp"],
        &[0.01, 0.1, 1.0, 10.0],
        &[1.0, 3.0, 5.0],
    )
    .unwrap();
    let mut best: Vec<(&str, f64)> = Vec::new();
    for (reg, w) in settings {
        let mut cfg = base.with_regularizer(reg, w);
        if reg == Regularizer::Eikonal && w != 1.0 {
            continue;
        }
        cfg.output = base
            .output
            .join("sweep")
            .join(format!("{}-{}", reg.name(), reg.simp_exponent().unwrap_or(w)));
        let iou = best_iou(&cfg, &mut |m| eprintln!("{m}"));
        match best.iter_mut().find(|(n, _)| *n == reg.name()) {
            Some(e) => e.1 = e.1.max(iou),
            None => best.push((reg.name(), iou)),
        }
    }
    let eik = best.iter().find(|(n, _)| *n == "eikonal").map_or(f64::NAN, |e| e.1);
    let pass = best.iter().filter(|(n, _)| *n != "eikonal").all(|(_, v)| eik > *v);
    let detail: Vec<String> = best.iter().map(|(n, v)| format!("{n} {v:.4}")).collect();
    report(
        6,
        pass,
        &format!(
            "best-seed IoU at best weight: {} (eikonal strictly highest)",
            detail.join(", ")
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 7

#[test]
fn criterion_7_training_mechanics() {
    let spec = catalog("circle").unwrap();
    let sol = spec.solve().unwrap();
    let meas = spec
        .measurements(&sol, &MeasurementLayout::for_family(spec.family).unwrap())
        .unwrap();
    let model = spec.material_model().unwrap();
    let tp = TransformParams { load: 1.0, band: 0.1 };
    let domain = spec.family.domain();

    // Default collocation: 10 mini-batches of 1000 points, one update each.
    let colloc = CollocationSet::lhs(domain, DEFAULT_POINTS, DEFAULT_BATCHES, 0).unwrap();
    let sizes_ok = colloc.num_batches() == 10 && (0..10).all(|b| colloc.batch(b).len() == 1000);
    let data = TrainData {
        model: &model,
        measurements: &meas,
        collocation: &colloc,
    };
    let schedule = Schedule::matrix();
    let first_drop = schedule.drops[0].0;
    let (a_psi, a_phi) = schedule.rates(first_drop - 1);
    let (b_psi, b_phi) = schedule.rates(0);
    let ratio_ok = a_psi / a_phi == 10.0 && b_psi / b_phi == 10.0;

    let mut bundle = FieldBundle::init(spec.family, spec.physics(), tp, &[50; 4], 10.0, 0).unwrap();
    let pre = pretrain_levelset(&mut bundle, colloc.points(), &PretrainConfig::default()).unwrap();
    let mae = label_mae(&bundle, colloc.points()).unwrap();

    let cfg = TrainConfig::new(schedule);
    let mut state = TrainState::new(bundle);
    train_until(&mut state, &data, &cfg, 1, &mut |_, _| {}).unwrap();
    let updates = state.adam.steps();

    // Resume: 2 + 2 epochs through a checkpoint file against 4 straight.
    let small = CollocationSet::lhs(domain, 400, 10, 1).unwrap();
    let data = TrainData {
        collocation: &small,
        ..data
    };
    let init = FieldBundle::init(spec.family, spec.physics(), tp, &[16, 16], 10.0, 3).unwrap();
    let mut straight = TrainState::new(init.clone());
    train_until(&mut straight, &data, &cfg, 4, &mut |_, _| {}).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.ckpt");
    let mut first = TrainState::new(init);
    train_until(&mut first, &data, &cfg, 2, &mut |_, _| {}).unwrap();
    first.save(&path).unwrap();
    let mut resumed = TrainState::load(&path).unwrap();
    train_until(&mut resumed, &data, &cfg, 4, &mut |_, _| {}).unwrap();
    let bits = |s: &TrainState| s.bundle.params_flat().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    let resume_ok = bits(&resumed) == bits(&straight) && resumed == straight;

    let pass = sizes_ok && updates == 10 && ratio_ok && mae <= 0.02 && resume_ok;
    report(
        7,
        pass,
        &format!(
            "batches of 1000 {sizes_ok}, updates per epoch {updates} (= 10), alpha ratio {:.1} (= 10), \
             pretraining MAE {mae:.4} after {} epochs (<= 0.02), bit-exact resume {resume_ok}",
            a_psi / a_phi,
            pre.losses.len()
        ),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- 8

/// `T + T^2/2 = 1.5 (1 - s)`, `s = x1 + 0.5`, with `k = T0 = 1`.
fn exact_temperature(x1: f64) -> f64 {
    -1.0 + (1.0 + 3.0 * (0.5 - x1)).sqrt()
}

#[test]
fn criterion_8_thermal_residuals() {
    let t_mid = exact_temperature(0.0);
    let g = Grid::with_counts(Rect::new(-0.5, 0.5, -0.5, 0.5), 100, 100);
    let mut p = ThermalProblem::new(g, 1.0, 1.0, |_| ThermalPhase::Conductor);
    p.fix_side(Side::Left, 1.0);
    p.fix_side(Side::Right, 0.0);
    let sol = solve_thermal(&p).unwrap();
    let fem_mid = sol.temperature_at([0.0, 0.0]).unwrap();

    let model = MaterialModel::Thermal(ThermalModel {
        k: 1.0,
        t0: 1.0,
        inclusion: ThermalInclusion::Insulating,
    });
    let w = LossWeights::default();
    let pts = lhs_sample(Rect::new(-0.5, 0.5, -0.5, 0.5), 1000, 11).unwrap();
    let mut gov = 0.0;
    for x in &pts {
        let t = exact_temperature(x[0]);
        let state = StateEval::Thermal(ThermalState {
            t: SpatialDual::new(t, -1.5 / (1.0 + t), 0.0),
            q1: SpatialDual::constant(1.5),
            q2: SpatialDual::constant(0.0),
        });
        let r = residual(&state, 1.0, &model).unwrap();
        let sq = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
        gov += sq(&r.balance) + w.cr * sq(&r.constitutive);
    }
    gov /= pts.len() as f64;

    let pass = sol.residual <= 1e-10 && gov <= 1e-18 && (t_mid - 0.581_138_830_084_19).abs() < 1e-12;
    report(
        8,
        pass,
        &format!(
            "FEM residual {:.1e} (<= 1e-10), exact-field L_gov {gov:.1e} (<= 1e-18), T(0.5) exact {t_mid:.5}, FEM {fem_mid:.5}",
            sol.residual
        ),
    );
    assert!(pass);
}
