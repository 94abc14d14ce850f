//! Detection accuracy and raster export.
//!
//! A [`Raster`] samples a field at cell centers of a regular grid over a
//! rectangle. Row 0 is the top row (largest `x2`), so the files display
//! upright. Each raster is written twice:
//!
//! ```text
//! rho.csv                     rho.pgm
//! # raster 4 2 -0.5 0.5 -0.5 0.5    P5
//! 1,1,1,1                     # range 0 1
//! 1,0.0012,0.4,1              4 2
//!                             255
//!                             <8 bytes>
//! ```
//!
//! The CSV holds every value in shortest round-trip form. The graymap maps
//! the stated range linearly onto 0..=255.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::density::{grad_norm, LevelSetDensity};
use crate::error::{Error, Result};
use crate::fsutil::write_atomic;
use crate::networks::{FieldBundle, FieldRole};
use crate::problem::Rect;

/// Default IoU raster resolution per axis.
pub const DEFAULT_RASTER: usize = 512;

/// Density below which a cell belongs to the inclusion phase.
pub const IOU_THRESHOLD: f64 = 0.5;

/// Field values at the cell centers of a regular grid, row-major from the top.
#[derive(Clone, Debug, PartialEq)]
pub struct Raster {
    pub domain: Rect,
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<f64>,
}

impl Raster {
    pub fn new(domain: Rect, nx: usize, ny: usize, data: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 || data.len() != nx * ny {
            return Err(Error::Dimension(format!(
                "{} values for a {nx} x {ny} raster",
                data.len()
            )));
        }
        Ok(Self { domain, nx, ny, data })
    }

    /// Center of cell `(row, col)`.
    pub fn cell_center(&self, row: usize, col: usize) -> [f64; 2] {
        let d = self.domain;
        [
            d.x_min + (col as f64 + 0.5) * d.width() / self.nx as f64,
            d.y_max - (row as f64 + 0.5) * d.height() / self.ny as f64,
        ]
    }

    /// Cell centers in storage order.
    pub fn centers(domain: Rect, nx: usize, ny: usize) -> Vec<[f64; 2]> {
        let r = Self {
            domain,
            nx,
            ny,
            data: Vec::new(),
        };
        (0..ny)
            .flat_map(|i| (0..nx).map(move |j| (i, j)))
            .map(|(i, j)| r.cell_center(i, j))
            .collect()
    }

    pub fn sample(domain: Rect, nx: usize, ny: usize, f: impl Fn([f64; 2]) -> f64) -> Result<Self> {
        let data = Self::centers(domain, nx, ny).into_iter().map(f).collect();
        Self::new(domain, nx, ny, data)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.nx + col]
    }

    /// Same raster with the row order reversed.
    pub fn flipped(&self) -> Self {
        let data = self.data.chunks(self.nx).rev().flatten().copied().collect();
        Self { data, ..self.clone() }
    }

    pub fn range(&self) -> (f64, f64) {
        self.data
            .iter()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn to_csv(&self) -> String {
        let d = self.domain;
        let mut s = format!(
            "# raster {} {} {} {} {} {}\n",
            self.nx, self.ny, d.x_min, d.x_max, d.y_min, d.y_max
        );
        for row in self.data.chunks(self.nx) {
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    s.push(',');
                }
                write!(s, "{v}").expect("string write");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: origin.to_string(),
            line,
            message,
        };
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        let fields: Vec<&str> = header
            .strip_prefix("# raster ")
            .ok_or_else(|| err(1, "expected `# raster nx ny x_min x_max y_min y_max`".into()))?
            .split_whitespace()
            .collect();
        if fields.len() != 6 {
            return Err(err(1, format!("expected 6 header fields, found {}", fields.len())));
        }
        let count = |s: &str| s.parse::<usize>().map_err(|_| err(1, format!("bad size `{s}`")));
        let bound = |s: &str| s.parse::<f64>().map_err(|_| err(1, format!("bad bound `{s}`")));
        let (nx, ny) = (count(fields[0])?, count(fields[1])?);
        let domain = Rect::new(
            bound(fields[2])?,
            bound(fields[3])?,
            bound(fields[4])?,
            bound(fields[5])?,
        );
        let mut data = Vec::with_capacity(nx * ny);
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let row: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| err(i + 2, format!("not a number: `{s}`"))))
                .collect::<Result<_>>()?;
            if row.len() != nx {
                return Err(err(i + 2, format!("expected {nx} values, found {}", row.len())));
            }
            data.extend(row);
        }
        Self::new(domain, nx, ny, data)
    }

    /// Binary graymap mapping `[lo, hi]` onto 0..=255; non-finite values are black.
    pub fn to_pgm(&self, lo: f64, hi: f64) -> Vec<u8> {
        let mut out = format!("P5\n# range {lo} {hi}\n{} {}\n255\n", self.nx, self.ny).into_bytes();
        let span = if hi > lo { hi - lo } else { 1.0 };
        out.extend(self.data.iter().map(|&v| {
            if v.is_finite() {
                (((v - lo) / span).clamp(0.0, 1.0) * 255.0).round() as u8
            } else {
                0
            }
        }));
        out
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv().as_bytes())
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(&text, &path.display().to_string())
    }

    fn check_same_shape(&self, other: &Raster) -> Result<()> {
        if (self.nx, self.ny) != (other.nx, other.ny) {
            return Err(Error::Dimension(format!(
                "raster {} x {} versus {} x {}",
                self.nx, self.ny, other.nx, other.ny
            )));
        }
        Ok(())
    }

    /// Inclusion mask `value < threshold`.
    pub fn mask_below(&self, threshold: f64) -> Vec<bool> {
        self.data.iter().map(|&v| v < threshold).collect()
    }
}

/// `|A ∩ B| / |A ∪ B|` of two masks; 1 when both are empty.
pub fn iou_masks(a: &[bool], b: &[bool]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!("masks of {} and {} cells", a.len(), b.len())));
    }
    let (mut inter, mut union) = (0usize, 0usize);
    for (&x, &y) in a.iter().zip(b) {
        inter += (x && y) as usize;
        union += (x || y) as usize;
    }
    Ok(if union == 0 { 1.0 } else { inter as f64 / union as f64 })
}

/// Intersection over union of the low-density phases of two density rasters.
pub fn iou(predicted: &Raster, truth: &Raster, threshold: f64) -> Result<f64> {
    predicted.check_same_shape(truth)?;
    iou_masks(&predicted.mask_below(threshold), &truth.mask_below(threshold))
}

/// Level set, density and level-set gradient norm of a bundle on a raster.
#[derive(Clone, Debug)]
pub struct DensityFields {
    pub rho: Raster,
    pub phi: Raster,
    pub grad_phi: Raster,
}

impl DensityFields {
    pub fn compute(bundle: &FieldBundle, density: &LevelSetDensity, nx: usize, ny: usize) -> Result<Self> {
        let domain = bundle.family().domain();
        let centers = Raster::centers(domain, nx, ny);
        let mut phi = Vec::with_capacity(centers.len());
        let mut rho = Vec::with_capacity(centers.len());
        let mut grad = Vec::with_capacity(centers.len());
        for chunk in centers.chunks(4096) {
            for f in bundle.eval_many(FieldRole::Phi, chunk)? {
                phi.push(f.value);
                rho.push(density.density(f).value);
                grad.push(grad_norm(f));
            }
        }
        Ok(Self {
            rho: Raster::new(domain, nx, ny, rho)?,
            phi: Raster::new(domain, nx, ny, phi)?,
            grad_phi: Raster::new(domain, nx, ny, grad)?,
        })
    }

    /// Writes `rho`, `phi` and `grad_phi` as `.csv` and `.pgm` into `dir`
    /// and returns the paths written.
    pub fn export(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for (name, r, range) in [
            ("rho", &self.rho, (0.0, 1.0)),
            ("phi", &self.phi, self.phi.range()),
            ("grad_phi", &self.grad_phi, (0.0, 2.0)),
        ] {
            let csv = dir.join(format!("{name}.csv"));
            r.save_csv(&csv)?;
            let pgm = dir.join(format!("{name}.pgm"));
            write_atomic(&pgm, &r.to_pgm(range.0, range.1))?;
            written.extend([csv, pgm]);
        }
        Ok(written)
    }
}

/// Renders a bundle's density fields and writes them into `dir`.
pub fn export_density(
    bundle: &FieldBundle,
    density: &LevelSetDensity,
    nx: usize,
    ny: usize,
    dir: &Path,
) -> Result<DensityFields> {
    let fields = DensityFields::compute(bundle, density, nx, ny)?;
    fields.export(dir)?;
    Ok(fields)
}

/// Outcome of evaluating one trained model against the ground truth.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    /// What was evaluated (checkpoint or raster path).
    pub source: String,
    pub seed: Option<u64>,
    pub iou: f64,
    pub threshold: f64,
    pub nx: usize,
    pub ny: usize,
    /// Completed training epochs, when known.
    pub epochs: Option<usize>,
    /// Last epoch's `(L_meas, L_gov, L_reg, total)`.
    pub final_losses: Option<[f64; 4]>,
    /// Wall-clock training time, when known.
    pub seconds: Option<f64>,
}

impl EvalReport {
    /// `key = value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| writeln!(s, "{k} = {v}").expect("string write");
        put("source", self.source.clone());
        if let Some(seed) = self.seed {
            put("seed", seed.to_string());
        }
        put("iou", format!("{:.6}", self.iou));
        put("threshold", self.threshold.to_string());
        put("raster", format!("{}x{}", self.nx, self.ny));
        if let Some(e) = self.epochs {
            put("epochs", e.to_string());
        }
        if let Some(l) = self.final_losses {
            put("loss.meas", format!("{:e}", l[0]));
            put("loss.gov", format!("{:e}", l[1]));
            put("loss.reg", format!("{:e}", l[2]));
            put("loss.total", format!("{:e}", l[3]));
        }
        if let Some(t) = self.seconds {
            put("runtime_seconds", format!("{t:.1}"));
        }
        s
    }
}

/// One run of a regularizer sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub regularizer: String,
    /// Loss weight, or the exponent for SIMP.
    pub weight: f64,
    pub seed: u64,
    /// `NaN` when the run failed.
    pub iou: f64,
    pub final_loss: f64,
    pub status: String,
}

impl SweepRow {
    pub const HEADER: &'static str = "regularizer,weight,seed,iou,final_loss,status";

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{:.6},{:e},{}",
            self.regularizer, self.weight, self.seed, self.iou, self.final_loss, self.status
        )
    }
}

/// Best IoU over seeds for each `(regularizer, weight)`, in first-seen order.
pub fn best_per_setting(rows: &[SweepRow]) -> Vec<(String, f64, f64)> {
    let mut out: Vec<(String, f64, f64)> = Vec::new();
    for r in rows {
        let iou = if r.iou.is_nan() { f64::NEG_INFINITY } else { r.iou };
        match out.iter_mut().find(|(n, w, _)| *n == r.regularizer && *w == r.weight) {
            Some(e) => e.2 = e.2.max(iou),
            None => out.push((r.regularizer.clone(), r.weight, iou)),
        }
    }
    out
}
