//! Flat `key = value` text configuration.
//!
//! ```text
//! # comment
//! case.file = data/case.txt
//! [train]
//! epochs = 30000        # same as train.epochs
//! ```
//!
//! A `[section]` line prefixes the keys that follow it. Keys may appear only
//! once. Every error names the file and line.
//!
//! [`DataConfig`] drives data generation and [`RunConfig`] drives training;
//! relative paths inside a file are resolved against the file's directory.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dataforge::{catalog, CaseSpec, MeasurementLayout, TRUTH_RASTER};
use crate::density::LevelSetDensity;
use crate::error::{Error, Result};
use crate::losses::{LossWeights, Regularizer};
use crate::networks::TransformParams;
use crate::problem::{PhysicsKind, ProblemFamily, Side};
use crate::training::{
    CollocationSet, EikonalPoints, NetSpec, PretrainConfig, RunSpec, Schedule, TrainConfig, DEFAULT_BATCHES,
    DEFAULT_POINTS,
};

#[derive(Clone, Debug, Default)]
pub struct KeyValues {
    origin: String,
    entries: BTreeMap<String, (String, usize)>,
}

impl KeyValues {
    pub fn new(origin: impl Into<String>) -> Self {
        Self {
            origin: origin.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut kv = Self::new(origin);
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| kv.error(line_no, "unterminated section header".into()))?
                    .trim();
                if !valid_key(name) {
                    return Err(kv.error(line_no, format!("invalid section name `{name}`")));
                }
                section = format!("{name}.");
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| kv.error(line_no, format!("expected `key = value`, found `{line}`")))?;
            let key = format!("{section}{}", key.trim());
            if !valid_key(&key) {
                return Err(kv.error(line_no, format!("invalid key `{key}`")));
            }
            if let Some((_, first)) = kv.entries.get(&key) {
                return Err(kv.error(line_no, format!("duplicate key `{key}` (first set on line {first})")));
            }
            kv.entries.insert(key, (value.trim().to_string(), line_no));
        }
        Ok(kv)
    }

    /// Reads a settings file. An unreadable file is a configuration error.
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    fn error(&self, line: usize, message: String) -> Error {
        Error::Parse {
            path: self.origin.clone(),
            line,
            message,
        }
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    pub fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|(_, l)| *l)
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::MissingKey(key.to_string()))
    }

    /// Parses the value of `key` if present.
    pub fn parsed<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse()
                .map(Some)
                .map_err(|e| self.error(*line, format!("bad value for `{key}`: {e}"))),
        }
    }

    pub fn parsed_or<T>(&self, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    pub fn require_parsed<T>(&self, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.parsed(key)?.ok_or_else(|| Error::MissingKey(key.to_string()))
    }

    /// Comma-separated list value.
    pub fn list<T>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|e| self.error(*line, format!("bad list item `{s}` for `{key}`: {e}")))
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }

    /// Rejects keys outside the given set, reporting the first by line.
    pub fn check_known(&self, known: &[&str]) -> Result<()> {
        let mut unknown: Vec<(&String, usize)> = self
            .entries
            .iter()
            .filter(|(k, _)| !known.contains(&k.as_str()))
            .map(|(k, (_, l))| (k, *l))
            .collect();
        unknown.sort_by_key(|(_, l)| *l);
        match unknown.first() {
            Some((k, l)) => Err(self.error(*l, format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        let line = self.entries.get(key).map_or(0, |e| e.1);
        self.entries.insert(key.to_string(), (value.to_string(), line));
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Settings of `generate-data`.
///
/// ```text
/// case.catalog = circle       # or case.family, case.matrix, case.inclusion, case.shape
/// case.resolution = 200
/// measure.per_side = 100
/// measure.sides = left, right, bottom, top
/// measure.noise = 0
/// measure.seed = 0
/// output.dir = data/circle
/// output.raster = 512
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct DataConfig {
    pub case: CaseSpec,
    pub layout: MeasurementLayout,
    pub output: PathBuf,
    pub raster: usize,
}

const DATA_KEYS: &[&str] = &[
    "case.catalog",
    "case.id",
    "case.description",
    "case.family",
    "case.matrix",
    "case.inclusion",
    "case.shape",
    "case.load_ratio",
    "case.resolution",
    "measure.per_side",
    "measure.sides",
    "measure.noise",
    "measure.seed",
    "output.dir",
    "output.raster",
];

impl DataConfig {
    pub fn from_keys(kv: &KeyValues, base: &Path) -> Result<Self> {
        kv.check_known(DATA_KEYS)?;
        let mut case = match kv.get("case.catalog") {
            Some(id) => catalog(id)?,
            None => CaseSpec::from_keys(kv, "case.")?,
        };
        if let Some(r) = kv.parsed("case.resolution")? {
            case.resolution = r;
        }
        if let Some(r) = kv.parsed("case.load_ratio")? {
            case.load_ratio = r;
        }
        case.validate()?;
        let default = MeasurementLayout::for_family(case.family)?;
        let layout = match (
            kv.parsed::<usize>("measure.per_side")?,
            kv.list::<Side>("measure.sides")?,
        ) {
            (None, None) => default,
            (per_side, sides) => {
                let sides = sides.unwrap_or_else(|| match case.family {
                    ProblemFamily::Layer => vec![Side::Top],
                    f => f.known_sides(),
                });
                MeasurementLayout::uniform(case.family.domain(), per_side.unwrap_or(100), &sides)?
            }
        };
        let layout = layout.with_noise(kv.parsed_or("measure.noise", 0.0)?, kv.parsed_or("measure.seed", 0)?)?;
        Ok(Self {
            case,
            layout,
            output: resolve(base, kv.require("output.dir")?),
            raster: kv.parsed_or("output.raster", TRUTH_RASTER)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_keys(&KeyValues::load(path)?, &base_dir(path))
    }
}

/// Settings of `pretrain`, `train` and `compare-regularizers`.
///
/// ```text
/// case.file = data/circle/case.txt
/// output.dir = runs/circle
/// train.epochs = 30000              # drops scale with the total
/// train.points = 10000
/// train.batches = 10
/// train.seeds = 0, 1, 2, 3
/// loss.regularizer = eikonal        # tvd, penalization, simp:3
/// loss.reg = 1
/// net.hidden = 50, 50, 50, 50
/// pretrain.epochs = 800
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub case_file: PathBuf,
    pub output: PathBuf,
    /// Total epochs; `None` keeps the family's full schedule.
    pub epochs: Option<usize>,
    /// Initial step size of the physical-field networks.
    pub lr: f64,
    pub points: usize,
    pub batches: usize,
    /// Seed of the collocation sample.
    pub collocation_seed: u64,
    /// Network initialization seeds, one run each.
    pub seeds: Vec<u64>,
    pub checkpoint_every: usize,
    pub eikonal_points: EikonalPoints,
    pub weights: LossWeights,
    pub delta: f64,
    pub net: Option<NetSpec>,
    pub pretrain: PretrainConfig,
    /// Resolution per axis of exported and evaluated rasters.
    pub raster: usize,
}

const RUN_KEYS: &[&str] = &[
    "case.file",
    "output.dir",
    "output.raster",
    "train.epochs",
    "train.lr",
    "train.points",
    "train.batches",
    "train.collocation_seed",
    "train.seeds",
    "train.checkpoint_every",
    "train.eikonal_points",
    "loss.meas",
    "loss.gov",
    "loss.reg",
    "loss.cr",
    "loss.inc",
    "loss.regularizer",
    "loss.delta",
    "net.hidden",
    "net.omega0",
    "pretrain.epochs",
    "pretrain.lr",
];

impl RunConfig {
    pub fn from_keys(kv: &KeyValues, base: &Path) -> Result<Self> {
        kv.check_known(RUN_KEYS)?;
        let d = LossWeights::default();
        let weights = LossWeights {
            meas: kv.parsed_or("loss.meas", d.meas)?,
            gov: kv.parsed_or("loss.gov", d.gov)?,
            reg: kv.parsed_or("loss.reg", d.reg)?,
            cr: kv.parsed_or("loss.cr", d.cr)?,
            inc: kv.parsed_or("loss.inc", d.inc)?,
            regularizer: kv.parsed_or("loss.regularizer", d.regularizer)?,
        };
        weights.validate()?;
        let eikonal_points = match kv.get("train.eikonal_points").unwrap_or("full") {
            "full" => EikonalPoints::Full,
            "batch" => EikonalPoints::Batch,
            other => {
                return Err(Error::Parse {
                    path: kv.origin().into(),
                    line: kv.line("train.eikonal_points").unwrap_or(0),
                    message: format!("train.eikonal_points must be `full` or `batch`, found `{other}`"),
                })
            }
        };
        let net = match (kv.list::<usize>("net.hidden")?, kv.parsed::<f64>("net.omega0")?) {
            (None, None) => None,
            (hidden, omega0) => {
                let d = NetSpec::default();
                Some(NetSpec {
                    hidden: hidden.unwrap_or(d.hidden),
                    omega0: omega0.unwrap_or(d.omega0),
                })
            }
        };
        let pd = PretrainConfig::default();
        let cfg = Self {
            case_file: resolve(base, kv.require("case.file")?),
            output: resolve(base, kv.require("output.dir")?),
            epochs: kv.parsed("train.epochs")?,
            lr: kv.parsed_or("train.lr", 1e-3)?,
            points: kv.parsed_or("train.points", DEFAULT_POINTS)?,
            batches: kv.parsed_or("train.batches", DEFAULT_BATCHES)?,
            collocation_seed: kv.parsed_or("train.collocation_seed", 0)?,
            seeds: kv.list("train.seeds")?.unwrap_or_else(|| vec![0]),
            checkpoint_every: kv.parsed_or("train.checkpoint_every", 100)?,
            eikonal_points,
            weights,
            delta: kv.parsed_or("loss.delta", crate::density::DEFAULT_DELTA)?,
            net,
            pretrain: PretrainConfig {
                epochs: kv.parsed_or("pretrain.epochs", pd.epochs)?,
                lr: kv.parsed_or("pretrain.lr", pd.lr)?,
            },
            raster: kv.parsed_or("output.raster", TRUTH_RASTER)?,
        };
        if cfg.seeds.is_empty() {
            return Err(Error::Config("train.seeds lists no seeds".into()));
        }
        if !(cfg.delta > 0.0 && cfg.delta.is_finite()) {
            return Err(Error::Config(format!("loss.delta must be positive, got {}", cfg.delta)));
        }
        if cfg.raster == 0 {
            return Err(Error::Config("output.raster must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_keys(&KeyValues::load(path)?, &base_dir(path))
    }

    /// Same settings with another regularizer and weight.
    pub fn with_regularizer(&self, regularizer: Regularizer, weight: f64) -> Self {
        let mut c = self.clone();
        c.weights.regularizer = regularizer;
        c.weights.reg = weight;
        c
    }

    /// Step-size schedule: the family preset, optionally rescaled.
    pub fn schedule(&self, family: ProblemFamily) -> Result<Schedule> {
        let preset = Schedule::for_family(family);
        let mut s = match self.epochs {
            Some(n) => preset.scaled(n)?,
            None => preset,
        };
        s.alpha_psi0 = self.lr;
        s.alpha_phi0 = self.lr / 10.0;
        s.validate()?;
        Ok(s)
    }

    pub fn run_spec(&self, family: ProblemFamily, physics: PhysicsKind) -> Result<RunSpec> {
        let density = LevelSetDensity::new(self.delta);
        let mut train = TrainConfig::new(self.schedule(family)?);
        train.weights = self.weights;
        train.density = density;
        train.eikonal_points = self.eikonal_points;
        train.checkpoint_every = self.checkpoint_every;
        Ok(RunSpec {
            family,
            physics,
            transform: TransformParams {
                load: 1.0,
                band: density.band,
            },
            net: self.net.clone().unwrap_or_else(|| NetSpec::for_family(family)),
            pretrain: self.pretrain,
            train,
        })
    }

    pub fn collocation(&self, family: ProblemFamily) -> Result<CollocationSet> {
        CollocationSet::lhs(family.domain(), self.points, self.batches, self.collocation_seed)
    }
}

fn valid_key(k: &str) -> bool {
    !k.is_empty()
        && !k.starts_with('.')
        && !k.ends_with('.')
        && k.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_prefix_keys() {
        let kv = KeyValues::parse("a = 1\n[train]\nepochs = 30 # trailing\n\nloss.reg = 0.5\n", "c").unwrap();
        assert_eq!(kv.get("a"), Some("1"));
        assert_eq!(kv.require_parsed::<usize>("train.epochs").unwrap(), 30);
        assert_eq!(kv.get("train.loss.reg"), Some("0.5"));
        assert_eq!(kv.line("train.epochs"), Some(3));
    }

    #[test]
    fn errors_carry_line_numbers() {
        for (text, line) in [
            ("a = 1\nnonsense\n", 2),
            ("a = 1\n\na = 2\n", 3),
            ("[open\n", 1),
            ("x y = 1\n", 1),
        ] {
            match KeyValues::parse(text, "run.cfg") {
                Err(Error::Parse { line: l, path, .. }) => {
                    assert_eq!((l, path.as_str()), (line, "run.cfg"), "{text}")
                }
                other => panic!("{text}: {other:?}"),
            }
        }
        let kv = KeyValues::parse("\n\nn = abc\n", "r").unwrap();
        assert!(matches!(kv.parsed::<usize>("n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn missing_key_is_named() {
        let kv = KeyValues::parse("", "r").unwrap();
        match kv.require("case.file") {
            Err(Error::MissingKey(k)) => assert_eq!(k, "case.file"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn run_config_defaults_and_overrides() {
        let text = "case.file = data/case.txt\noutput.dir = out\n[train]\nepochs = 30000\nseeds = 0,1,2,3\n[loss]\nregularizer = simp:3\nreg = 0\n";
        let kv = KeyValues::parse(text, "run.cfg").unwrap();
        let cfg = RunConfig::from_keys(&kv, Path::new("/base")).unwrap();
        assert_eq!(cfg.case_file, PathBuf::from("/base/data/case.txt"));
        assert_eq!(cfg.seeds, vec![0, 1, 2, 3]);
        assert_eq!(cfg.weights.regularizer, Regularizer::Simp(3.0));
        assert_eq!(cfg.points, 10_000);
        let s = cfg.schedule(ProblemFamily::Matrix).unwrap();
        assert_eq!(s.drops, vec![(12_000, 1e-4), (24_000, 1e-5)]);
        assert_eq!(s.rates(0), (1e-3, 1e-4));
        let spec = cfg.run_spec(ProblemFamily::Matrix, PhysicsKind::LinearElastic).unwrap();
        assert_eq!(spec.transform.band, 0.1);
    }

    #[test]
    fn run_config_missing_key() {
        let kv = KeyValues::parse("output.dir = out\n", "run.cfg").unwrap();
        match RunConfig::from_keys(&kv, Path::new("")) {
            Err(e @ Error::MissingKey(_)) => {
                assert_eq!(e.exit_code(), 2);
                assert!(e.to_string().contains("case.file"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn data_config_catalog_and_layout() {
        let text = "case.catalog = 20\nmeasure.per_side = 50\nmeasure.noise = 0.01\noutput.dir = d\n";
        let cfg = DataConfig::from_keys(&KeyValues::parse(text, "d.cfg").unwrap(), Path::new("")).unwrap();
        assert_eq!(cfg.case.family, ProblemFamily::Layer);
        assert_eq!(cfg.layout.points.len(), 50);
        assert_eq!(cfg.layout.noise_std, 0.01);
        let text = "case.family = matrix\ncase.matrix = linear(1, 0.3)\ncase.inclusion = void\ncase.shape = circle(0, 0, 0.2)\noutput.dir = d\n";
        let cfg = DataConfig::from_keys(&KeyValues::parse(text, "d.cfg").unwrap(), Path::new("")).unwrap();
        assert_eq!(cfg.layout.points.len(), 400);
        let bad = "case.catalog = 1\ncase.typo = 3\noutput.dir = d\n";
        assert!(matches!(
            DataConfig::from_keys(&KeyValues::parse(bad, "d.cfg").unwrap(), Path::new("")),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn lists_and_unknown_keys() {
        let kv = KeyValues::parse("w = 0.01, 0.1,1\nzzz = 1\n", "r").unwrap();
        assert_eq!(kv.list::<f64>("w").unwrap().unwrap(), vec![0.01, 0.1, 1.0]);
        assert!(matches!(kv.check_known(&["w"]), Err(Error::Parse { line: 2, .. })));
    }
}
