//! End-to-end workflows behind the command-line interface.
//!
//! A training run writes one directory per initialization seed:
//!
//! ```text
//! <output.dir>/
//!   summary.csv              seed,epochs,final_loss,iou,status
//!   seed-0/
//!     pretrained.ckpt        level set after pretraining (all networks)
//!     pretrain.csv           epoch,mae
//!     checkpoint.ckpt        networks, optimizer moments, epoch, history
//!     history.csv            epoch,L_meas,L_gov,L_reg,total
//!     rho.csv  rho.pgm       density raster
//!     phi.csv  phi.pgm       level-set raster
//!     grad_phi.csv  grad_phi.pgm
//!     report.txt             evaluation report
//! ```
//!
//! Training resumes from `checkpoint.ckpt` when it exists and starts from
//! `pretrained.ckpt` when only that exists.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{DataConfig, RunConfig};
use crate::dataforge::{generate_case, CaseFile, MeasurementSet};
use crate::error::{Error, Result};
use crate::fsutil::write_atomic;
use crate::losses::Regularizer;
use crate::metrics::{iou, DensityFields, EvalReport, Raster, SweepRow, IOU_THRESHOLD};
use crate::networks::{load_bundle, save_bundle, FieldBundle};
use crate::physics::MaterialModel;
use crate::training::{
    history_csv, pretrain_levelset, train_until, CollocationSet, PretrainReport, RunSpec, TrainData, TrainState,
};

/// Solves the configured case and writes its files.
pub fn generate_data(cfg: &DataConfig) -> Result<CaseFile> {
    generate_case(&cfg.case, &cfg.layout, cfg.raster, &cfg.output)
}

/// Everything a training run reads before the first update.
pub struct RunContext {
    pub config: RunConfig,
    pub case: CaseFile,
    pub model: MaterialModel,
    pub measurements: MeasurementSet,
    pub collocation: CollocationSet,
    pub spec: RunSpec,
    pub truth: Raster,
}

impl RunContext {
    pub fn new(config: &RunConfig) -> Result<Self> {
        let case = CaseFile::load(&config.case_file)?;
        let measurements = case.load_measurements()?;
        let family = case.spec.family;
        let model = case.spec.material_model()?;
        Ok(Self {
            spec: config.run_spec(family, case.spec.physics())?,
            collocation: config.collocation(family)?,
            truth: Raster::load_csv(&case.truth)?,
            config: config.clone(),
            case,
            model,
            measurements,
        })
    }

    pub fn data(&self) -> TrainData<'_> {
        TrainData {
            model: &self.model,
            measurements: &self.measurements,
            collocation: &self.collocation,
        }
    }

    pub fn seed_dir(&self, seed: u64) -> PathBuf {
        self.config.output.join(format!("seed-{seed}"))
    }

    /// Initializes and pretrains the networks of one seed, writing
    /// `pretrained.ckpt` and `pretrain.csv`.
    pub fn pretrain(&self, seed: u64) -> Result<(FieldBundle, PretrainReport)> {
        let mut bundle = self.spec.init_bundle(seed)?;
        let report = pretrain_levelset(&mut bundle, self.collocation.points(), &self.spec.pretrain)?;
        let dir = self.seed_dir(seed);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        save_bundle(&bundle, &dir.join("pretrained.ckpt"))?;
        let mut csv = String::from("epoch,mae\n");
        for (i, l) in report.losses.iter().enumerate() {
            writeln!(csv, "{i},{l:e}").expect("string write");
        }
        writeln!(csv, "{},{:e}", report.losses.len(), report.final_mae).expect("string write");
        write_atomic(&dir.join("pretrain.csv"), csv.as_bytes())?;
        Ok((bundle, report))
    }

    /// Training state to continue from: checkpoint, pretrained networks, or
    /// a fresh pretraining.
    fn starting_state(&self, seed: u64) -> Result<TrainState> {
        let dir = self.seed_dir(seed);
        let ckpt = dir.join("checkpoint.ckpt");
        if ckpt.exists() {
            return TrainState::load(&ckpt);
        }
        let pre = dir.join("pretrained.ckpt");
        let bundle = if pre.exists() {
            load_bundle(&pre)?
        } else {
            self.pretrain(seed)?.0
        };
        Ok(TrainState::new(bundle))
    }

    /// Trains one seed to the end of the schedule and evaluates it.
    pub fn train_seed(&self, seed: u64, log: &mut dyn FnMut(&str)) -> Result<EvalReport> {
        let dir = self.seed_dir(seed);
        let ckpt = dir.join("checkpoint.ckpt");
        let mut state = self.starting_state(seed)?;
        let mut cfg = self.spec.train.clone();
        cfg.checkpoint_path = Some(ckpt.clone());
        let total = cfg.schedule.total_epochs;
        let every = (total / 20).max(1);
        let start = Instant::now();
        let outcome = train_until(&mut state, &self.data(), &cfg, total, &mut |s, r| {
            if s.epoch % every == 0 || s.epoch == total {
                log(&format!(
                    "seed {seed} epoch {}/{total}: meas {:.3e} gov {:.3e} reg {:.3e} total {:.3e}",
                    s.epoch, r.meas, r.gov, r.reg, r.total
                ));
            }
        });
        let seconds = start.elapsed().as_secs_f64();
        write_atomic(&dir.join("history.csv"), history_csv(&state.history).as_bytes())?;
        outcome?;
        state.save(&ckpt)?;
        let fields = DensityFields::compute(&state.bundle, &cfg.density, self.truth.nx, self.truth.ny)?;
        fields.export(&dir)?;
        let report = EvalReport {
            source: ckpt.display().to_string(),
            seed: Some(seed),
            iou: iou(&fields.rho, &self.truth, IOU_THRESHOLD)?,
            threshold: IOU_THRESHOLD,
            nx: self.truth.nx,
            ny: self.truth.ny,
            epochs: Some(state.epoch),
            final_losses: state.history.last().map(|r| [r.meas, r.gov, r.reg, r.total]),
            seconds: Some(seconds),
        };
        write_atomic(&dir.join("report.txt"), report.to_text().as_bytes())?;
        Ok(report)
    }

    /// Trains every configured seed and writes `summary.csv`. Failed seeds
    /// are reported in the summary and returned as errors.
    pub fn train_all(&self, log: &mut dyn FnMut(&str)) -> Vec<(u64, Result<EvalReport>)> {
        let results: Vec<(u64, Result<EvalReport>)> = self
            .config
            .seeds
            .iter()
            .map(|&s| (s, self.train_seed(s, log)))
            .collect();
        let mut csv = String::from("seed,epochs,final_loss,iou,status\n");
        for (seed, r) in &results {
            match r {
                Ok(rep) => writeln!(
                    csv,
                    "{seed},{},{:e},{:.6},ok",
                    rep.epochs.unwrap_or(0),
                    rep.final_losses.map_or(f64::NAN, |l| l[3]),
                    rep.iou
                ),
                Err(e) => writeln!(csv, "{seed},,,,{}", e.to_string().replace([',', '\n'], ";")),
            }
            .expect("string write");
        }
        if let Err(e) = write_atomic(&self.config.output.join("summary.csv"), csv.as_bytes()) {
            log(&format!("could not write summary: {e}"));
        }
        results
    }
}

/// Regularizer settings of a sweep: each loss-based regularizer at every
/// weight and SIMP at every exponent.
pub fn sweep_settings(regularizers: &[&str], weights: &[f64], exponents: &[f64]) -> Result<Vec<(Regularizer, f64)>> {
    let mut out = Vec::new();
    for &name in regularizers {
        match name {
            "simp" => out.extend(exponents.iter().map(|&p| (Regularizer::Simp(p), 0.0))),
            other => {
                let r: Regularizer = other.parse()?;
                if r.simp_exponent().is_some() {
                    out.push((r, 0.0));
                } else {
                    out.extend(weights.iter().map(|&w| (r, w)));
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Config("the sweep has no settings".into()));
    }
    Ok(out)
}

/// Trains every `(regularizer, weight)` setting for every seed of `config`
/// under `<output.dir>/sweep/<regularizer>-<weight>/` and returns one row
/// per run. `row` is called as soon as each run finishes.
pub fn compare_regularizers(
    config: &RunConfig,
    settings: &[(Regularizer, f64)],
    log: &mut dyn FnMut(&str),
    row: &mut dyn FnMut(&SweepRow),
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &(reg, weight) in settings {
        let label_weight = reg.simp_exponent().unwrap_or(weight);
        let mut cfg = config.with_regularizer(reg, weight);
        cfg.output = config
            .output
            .join("sweep")
            .join(format!("{}-{}", reg.name(), label_weight));
        let ctx = RunContext::new(&cfg)?;
        for &seed in &cfg.seeds {
            let r = match ctx.train_seed(seed, log) {
                Ok(rep) => SweepRow {
                    regularizer: reg.name().into(),
                    weight: label_weight,
                    seed,
                    iou: rep.iou,
                    final_loss: rep.final_losses.map_or(f64::NAN, |l| l[3]),
                    status: "ok".into(),
                },
                Err(e) => SweepRow {
                    regularizer: reg.name().into(),
                    weight: label_weight,
                    seed,
                    iou: f64::NAN,
                    final_loss: f64::NAN,
                    status: e.to_string().replace([',', '\n'], ";"),
                },
            };
            row(&r);
            rows.push(r);
        }
    }
    let mut csv = format!("{}\n", SweepRow::HEADER);
    for r in &rows {
        csv.push_str(&r.to_csv_line());
        csv.push('\n');
    }
    write_atomic(&config.output.join("sweep").join("sweep.csv"), csv.as_bytes())?;
    Ok(rows)
}

/// Ground-truth raster from a raster CSV or a case file.
pub fn load_truth(path: &Path) -> Result<Raster> {
    if path.extension().is_some_and(|e| e == "csv") {
        Raster::load_csv(path)
    } else {
        Raster::load_csv(&CaseFile::load(path)?.truth)
    }
}

/// Evaluates a density raster CSV, a checkpoint, or every seed of a run
/// directory against `truth`.
pub fn evaluate(run: &Path, truth: &Raster) -> Result<Vec<EvalReport>> {
    if run.is_dir() {
        let mut seeds: Vec<(u64, PathBuf)> = fs::read_dir(run)
            .map_err(|e| Error::io(run, e))?
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                let seed = name.strip_prefix("seed-")?.parse().ok()?;
                Some((seed, e.path().join("checkpoint.ckpt")))
            })
            .filter(|(_, p)| p.exists())
            .collect();
        seeds.sort();
        if seeds.is_empty() {
            return Err(Error::Config(format!("{} holds no trained seeds", run.display())));
        }
        return seeds
            .into_iter()
            .map(|(seed, p)| {
                let mut r = evaluate_file(&p, truth)?;
                r.seed = Some(seed);
                Ok(r)
            })
            .collect();
    }
    Ok(vec![evaluate_file(run, truth)?])
}

fn evaluate_file(path: &Path, truth: &Raster) -> Result<EvalReport> {
    let source = path.display().to_string();
    let mut report = EvalReport {
        source,
        seed: None,
        iou: 0.0,
        threshold: IOU_THRESHOLD,
        nx: truth.nx,
        ny: truth.ny,
        epochs: None,
        final_losses: None,
        seconds: None,
    };
    if path.extension().is_some_and(|e| e == "csv") {
        report.iou = iou(&Raster::load_csv(path)?, truth, IOU_THRESHOLD)?;
        return Ok(report);
    }
    let (bundle, state) = match TrainState::load(path) {
        Ok(s) => (s.bundle.clone(), Some(s)),
        Err(_) => (load_bundle(path)?, None),
    };
    if let Some(s) = &state {
        report.epochs = Some(s.epoch);
        report.final_losses = s.history.last().map(|r| [r.meas, r.gov, r.reg, r.total]);
    }
    let density = crate::density::LevelSetDensity::new(bundle.transform_params().band / 10.0);
    let fields = DensityFields::compute(&bundle, &density, truth.nx, truth.ny)?;
    report.iou = iou(&fields.rho, truth, IOU_THRESHOLD)?;
    Ok(report)
}
