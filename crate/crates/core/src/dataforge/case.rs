//! Cases: geometry, materials and loading of one synthetic experiment, the
//! catalog of predefined cases, and the on-disk case file.
//!
//! ```text
//! format = pinn-topo-case/1
//! id = 3
//! description = one star and one rectangle, void
//! family = matrix
//! matrix = linear(1, 0.3)
//! inclusion = void
//! shape = union(star(-0.18, 0.12, 0.16, 0.07, 5, 0.3), rect(0.2, -0.18, 0.12, 0.06, 0.5))
//! load_ratio = 0.01
//! resolution = 200
//! fem.status = ok
//! fem.iterations = 0
//! measurements = measurements.csv
//! truth = truth.csv
//! ```
//!
//! Physical units take the matrix width as the length scale. The applied
//! traction is `P_o = load_ratio * E`, with `E = 3 mu` for Neo-Hookean
//! matrices. File paths are relative to the case file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::elastic::{
    solve_linear, solve_neo_hookean, ElasticPhase, ElasticProblem, ElasticSolution, NeoHookeanOptions,
};
use super::extract::{extract_elastic, extract_thermal, MeasurementLayout};
use super::grid::{Grid, DEFAULT_RESOLUTION};
use super::measure::MeasurementSet;
use super::shapes::ShapeSpec;
use super::thermal::{solve_thermal, ThermalPhase, ThermalProblem, ThermalSolution};
use crate::config::KeyValues;
use crate::error::{Error, Result};
use crate::fsutil::write_atomic;
use crate::metrics::{Raster, DEFAULT_RASTER};
use crate::physics::{HyperModel, LinearInclusion, LinearModel, MaterialModel, Scales, ThermalInclusion, ThermalModel};
use crate::problem::{PhysicsKind, ProblemFamily, Side};

pub const CASE_FORMAT: &str = "pinn-topo-case/1";

/// Load ratio `P_o / E` of the linear elastic cases.
pub const LINEAR_LOAD_RATIO: f64 = 0.01;

/// Load ratio `P_o / E` of the Neo-Hookean cases.
pub const HYPER_LOAD_RATIO: f64 = 0.173;

/// Material of the body surrounding the inclusions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatrixMaterial {
    Linear { e: f64, nu: f64 },
    NeoHookean { mu: f64 },
    Conductor { k: f64, t0: f64 },
}

/// Material of the hidden phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InclusionMaterial {
    Void,
    Elastic { e: f64, nu: f64 },
    Rigid,
    Insulating,
    Conducting,
}

/// `name(a, b, ...)` with numeric arguments.
fn call_syntax(s: &str) -> std::result::Result<(&str, Vec<f64>), String> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s, Vec::new()));
    };
    let body = s[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| format!("missing `)` in `{s}`"))?;
    let args = body
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(|a| a.parse::<f64>().map_err(|_| format!("not a number: `{a}`")))
        .collect::<std::result::Result<_, _>>()?;
    Ok((s[..open].trim(), args))
}

impl fmt::Display for MatrixMaterial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixMaterial::Linear { e, nu } => write!(f, "linear({e}, {nu})"),
            MatrixMaterial::NeoHookean { mu } => write!(f, "neo-hookean({mu})"),
            MatrixMaterial::Conductor { k, t0 } => write!(f, "conductor({k}, {t0})"),
        }
    }
}

impl FromStr for MatrixMaterial {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match call_syntax(s)? {
            ("linear", a) if a.len() == 2 => Ok(MatrixMaterial::Linear { e: a[0], nu: a[1] }),
            ("neo-hookean", a) if a.len() == 1 => Ok(MatrixMaterial::NeoHookean { mu: a[0] }),
            ("conductor", a) if a.len() == 2 => Ok(MatrixMaterial::Conductor { k: a[0], t0: a[1] }),
            _ => Err(format!(
                "expected linear(E, nu), neo-hookean(mu) or conductor(k, T0), found `{s}`"
            )),
        }
    }
}

impl fmt::Display for InclusionMaterial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InclusionMaterial::Void => f.write_str("void"),
            InclusionMaterial::Elastic { e, nu } => write!(f, "elastic({e}, {nu})"),
            InclusionMaterial::Rigid => f.write_str("rigid"),
            InclusionMaterial::Insulating => f.write_str("insulating"),
            InclusionMaterial::Conducting => f.write_str("conducting"),
        }
    }
}

impl FromStr for InclusionMaterial {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match call_syntax(s)? {
            ("void", a) if a.is_empty() => Ok(InclusionMaterial::Void),
            ("elastic", a) if a.len() == 2 => Ok(InclusionMaterial::Elastic { e: a[0], nu: a[1] }),
            ("rigid", a) if a.is_empty() => Ok(InclusionMaterial::Rigid),
            ("insulating", a) if a.is_empty() => Ok(InclusionMaterial::Insulating),
            ("conducting", a) if a.is_empty() => Ok(InclusionMaterial::Conducting),
            _ => Err(format!(
                "expected void, elastic(E, nu), rigid, insulating or conducting, found `{s}`"
            )),
        }
    }
}

/// Everything needed to generate one synthetic experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseSpec {
    pub id: String,
    pub description: String,
    pub family: ProblemFamily,
    pub matrix: MatrixMaterial,
    pub inclusion: InclusionMaterial,
    /// Region occupied by the inclusions (the substrate for the layer).
    pub shape: ShapeSpec,
    /// `P_o / E`; ignored for thermal cases.
    pub load_ratio: f64,
    /// FEM elements per unit length.
    pub resolution: usize,
}

/// Solved forward problem of a case.
#[derive(Clone, Debug)]
pub enum CaseSolution {
    Elastic(ElasticSolution),
    Thermal(ThermalSolution),
}

impl CaseSolution {
    pub fn iterations(&self) -> usize {
        match self {
            CaseSolution::Elastic(s) => s.iterations,
            CaseSolution::Thermal(s) => s.iterations,
        }
    }
}

impl CaseSpec {
    fn new(
        id: &str,
        description: &str,
        family: ProblemFamily,
        matrix: MatrixMaterial,
        inclusion: InclusionMaterial,
        shape: ShapeSpec,
    ) -> Self {
        let load_ratio = match matrix {
            MatrixMaterial::NeoHookean { .. } => HYPER_LOAD_RATIO,
            MatrixMaterial::Linear { .. } => LINEAR_LOAD_RATIO,
            MatrixMaterial::Conductor { .. } => 1.0,
        };
        Self {
            id: id.into(),
            description: description.into(),
            family,
            matrix,
            inclusion,
            shape,
            load_ratio,
            resolution: DEFAULT_RESOLUTION,
        }
    }

    pub fn physics(&self) -> PhysicsKind {
        match self.matrix {
            MatrixMaterial::Linear { .. } => PhysicsKind::LinearElastic,
            MatrixMaterial::NeoHookean { .. } => PhysicsKind::NeoHookean,
            MatrixMaterial::Conductor { .. } => PhysicsKind::Thermal,
        }
    }

    /// Checks that family, materials and shape fit together.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(format!("case `{}`: {m}", self.id)));
        self.shape.validate()?;
        if self.resolution == 0 {
            return bad("resolution must be positive".into());
        }
        let thermal_family = matches!(self.family, ProblemFamily::Thermal { .. });
        let thermal_matrix = matches!(self.matrix, MatrixMaterial::Conductor { .. });
        if thermal_family != thermal_matrix {
            return bad(format!(
                "matrix `{}` does not fit the {} family",
                self.matrix, self.family
            ));
        }
        if !thermal_matrix && !(self.load_ratio > 0.0 && self.load_ratio.is_finite()) {
            return bad(format!("load ratio {} must be positive", self.load_ratio));
        }
        let ok = match (self.matrix, self.inclusion) {
            (MatrixMaterial::Linear { .. }, InclusionMaterial::Void | InclusionMaterial::Rigid) => true,
            (MatrixMaterial::Linear { .. }, InclusionMaterial::Elastic { e, nu }) => e > 0.0 && nu > -1.0 && nu < 0.5,
            (MatrixMaterial::NeoHookean { .. }, InclusionMaterial::Void) => true,
            (MatrixMaterial::Conductor { .. }, InclusionMaterial::Insulating | InclusionMaterial::Conducting) => true,
            _ => false,
        };
        if !ok {
            return bad(format!(
                "inclusion `{}` is not supported in matrix `{}`",
                self.inclusion, self.matrix
            ));
        }
        if self.family == ProblemFamily::Layer && self.inclusion != InclusionMaterial::Rigid {
            return bad("the layer sits on a rigid substrate".into());
        }
        self.material_model()?.validate()
    }

    /// Physical scales; `None` for thermal cases, which are solved unscaled.
    pub fn scales(&self) -> Result<Option<Scales>> {
        match self.matrix {
            MatrixMaterial::Linear { e, .. } => Scales::new(1.0, self.load_ratio * e, e).map(Some),
            MatrixMaterial::NeoHookean { mu } => Scales::hyperelastic(1.0, mu, self.load_ratio).map(Some),
            MatrixMaterial::Conductor { .. } => Ok(None),
        }
    }

    /// Nondimensional material model for the inverse problem.
    pub fn material_model(&self) -> Result<MaterialModel> {
        let scales = self.scales()?;
        Ok(match (self.matrix, scales) {
            (MatrixMaterial::Linear { nu, .. }, Some(s)) => {
                let inclusion = match self.inclusion {
                    InclusionMaterial::Void => LinearInclusion::Void,
                    InclusionMaterial::Rigid => LinearInclusion::Rigid,
                    InclusionMaterial::Elastic { e, nu } => LinearInclusion::Elastic {
                        e: s.modulus_to_nd(e),
                        nu,
                    },
                    other => return Err(Error::Config(format!("inclusion `{other}` in an elastic matrix"))),
                };
                MaterialModel::Linear(LinearModel::new(1.0, nu, inclusion))
            }
            (MatrixMaterial::NeoHookean { mu }, Some(s)) => MaterialModel::Hyper(HyperModel {
                mu: s.stress_to_nd(mu),
                disp_scale: s.strain(),
            }),
            (MatrixMaterial::Conductor { k, t0 }, _) => MaterialModel::Thermal(ThermalModel {
                k,
                t0,
                inclusion: match self.inclusion {
                    InclusionMaterial::Conducting => ThermalInclusion::Conducting,
                    _ => ThermalInclusion::Insulating,
                },
            }),
            _ => unreachable!("elastic matrices always have scales"),
        })
    }

    fn grid(&self) -> Result<Grid> {
        Grid::new(self.family.domain(), self.resolution)
    }

    /// FEM model of the elastic experiment in physical units.
    pub fn elastic_problem(&self) -> Result<ElasticProblem> {
        let solid = match self.matrix {
            MatrixMaterial::Linear { e, nu } => ElasticPhase::Solid { e, nu },
            MatrixMaterial::NeoHookean { mu } => ElasticPhase::Solid { e: 3.0 * mu, nu: 0.5 },
            MatrixMaterial::Conductor { .. } => {
                return Err(Error::Config(format!("case `{}` is not elastic", self.id)));
            }
        };
        let inner = match self.inclusion {
            InclusionMaterial::Void => ElasticPhase::Void,
            InclusionMaterial::Rigid => ElasticPhase::Rigid,
            InclusionMaterial::Elastic { e, nu } => ElasticPhase::Solid { e, nu },
            other => return Err(Error::Config(format!("inclusion `{other}` in an elastic matrix"))),
        };
        let p = self.scales()?.expect("elastic case").load;
        let mut prob = ElasticProblem::new(self.grid()?, |x| if self.shape.contains(x) { inner } else { solid });
        match self.family {
            ProblemFamily::Matrix => {
                prob.traction(Side::Left, [-p, 0.0]);
                prob.traction(Side::Right, [p, 0.0]);
                prob.pin_corners();
            }
            ProblemFamily::WideMatrix => {
                prob.traction(Side::Bottom, [0.0, -p]);
                prob.traction(Side::Top, [0.0, p]);
                prob.pin_corners();
            }
            ProblemFamily::Layer => {
                prob.traction(Side::Top, [0.0, -p]);
                prob.periodic_x = true;
                for n in prob.grid.side_nodes(Side::Bottom) {
                    prob.fix(n, 0, 0.0);
                    prob.fix(n, 1, 0.0);
                }
            }
            ProblemFamily::Thermal { .. } => unreachable!("validated family"),
        }
        Ok(prob)
    }

    /// FEM model of the thermal experiment: unit temperature on the left,
    /// zero on the right, insulated top and bottom.
    pub fn thermal_problem(&self) -> Result<ThermalProblem> {
        let MatrixMaterial::Conductor { k, t0 } = self.matrix else {
            return Err(Error::Config(format!("case `{}` is not thermal", self.id)));
        };
        let inner = match self.inclusion {
            InclusionMaterial::Insulating => ThermalPhase::Insulator,
            InclusionMaterial::Conducting => ThermalPhase::PerfectConductor,
            other => return Err(Error::Config(format!("inclusion `{other}` in a conductor"))),
        };
        let mut prob = ThermalProblem::new(self.grid()?, k, t0, |x| {
            if self.shape.contains(x) {
                inner
            } else {
                ThermalPhase::Conductor
            }
        });
        prob.fix_side(Side::Left, 1.0);
        prob.fix_side(Side::Right, 0.0);
        Ok(prob)
    }

    /// Runs the forward solver.
    pub fn solve(&self) -> Result<CaseSolution> {
        self.validate()?;
        match self.matrix {
            MatrixMaterial::Linear { .. } => Ok(CaseSolution::Elastic(solve_linear(&self.elastic_problem()?)?)),
            MatrixMaterial::NeoHookean { mu } => Ok(CaseSolution::Elastic(solve_neo_hookean(
                &self.elastic_problem()?,
                &NeoHookeanOptions::new(mu),
            )?)),
            MatrixMaterial::Conductor { .. } => Ok(CaseSolution::Thermal(solve_thermal(&self.thermal_problem()?)?)),
        }
    }

    /// Boundary measurements of a solution.
    pub fn measurements(&self, sol: &CaseSolution, layout: &MeasurementLayout) -> Result<MeasurementSet> {
        match sol {
            CaseSolution::Elastic(s) => extract_elastic(s, layout, &self.scales()?.expect("elastic case")),
            CaseSolution::Thermal(s) => {
                let dirichlet: Vec<Side> = [Side::Left, Side::Right]
                    .into_iter()
                    .filter(|&side| self.family.side_known(side))
                    .collect();
                let layout = MeasurementLayout {
                    points: layout
                        .points
                        .iter()
                        .zip(layout.sides(self.family.domain())?)
                        .filter(|(_, side)| self.family.side_known(*side))
                        .map(|(p, _)| *p)
                        .collect(),
                    ..layout.clone()
                };
                extract_thermal(s, &layout, &dirichlet)
            }
        }
    }

    /// Ground-truth density: 0 inside the inclusions, 1 elsewhere.
    pub fn truth_raster(&self, nx: usize, ny: usize) -> Result<Raster> {
        Raster::sample(self.family.domain(), nx, ny, |x| {
            if self.shape.contains(x) {
                0.0
            } else {
                1.0
            }
        })
    }

    fn write_keys(&self, kv: &mut Vec<(String, String)>) {
        let mut put = |k: &str, v: String| kv.push((k.into(), v));
        put("format", CASE_FORMAT.into());
        put("id", self.id.clone());
        put("description", self.description.clone());
        put("family", self.family.to_string());
        put("matrix", self.matrix.to_string());
        put("inclusion", self.inclusion.to_string());
        put("shape", self.shape.to_string());
        put("load_ratio", self.load_ratio.to_string());
        put("resolution", self.resolution.to_string());
    }

    /// Reads the case keys (prefixed by `prefix`) from parsed key-values.
    pub fn from_keys(kv: &KeyValues, prefix: &str) -> Result<Self> {
        let key = |k: &str| format!("{prefix}{k}");
        let family: ProblemFamily = kv.require_parsed(&key("family"))?;
        let matrix: MatrixMaterial = kv.require_parsed(&key("matrix"))?;
        let mut spec = Self::new(
            kv.get(&key("id")).unwrap_or("custom"),
            kv.get(&key("description")).unwrap_or(""),
            family,
            matrix,
            kv.require_parsed(&key("inclusion"))?,
            kv.require_parsed(&key("shape"))?,
        );
        spec.load_ratio = kv.parsed_or(&key("load_ratio"), spec.load_ratio)?;
        spec.resolution = kv.parsed_or(&key("resolution"), spec.resolution)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Outcome of the forward solve recorded in a case file.
#[derive(Clone, Debug, PartialEq)]
pub enum FemStatus {
    Ok {
        iterations: usize,
    },
    /// The solver failed; the case has no measurements.
    Unavailable {
        reason: String,
    },
}

impl fmt::Display for FemStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FemStatus::Ok { iterations } => write!(f, "ok ({iterations} iterations)"),
            FemStatus::Unavailable { reason } => write!(f, "unavailable: {reason}"),
        }
    }
}

/// A case file: the spec, the FEM outcome and the data files beside it.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseFile {
    pub spec: CaseSpec,
    pub fem: FemStatus,
    pub measurements: Option<PathBuf>,
    pub truth: PathBuf,
}

const CASE_KEYS: &[&str] = &[
    "format",
    "id",
    "description",
    "family",
    "matrix",
    "inclusion",
    "shape",
    "load_ratio",
    "resolution",
    "fem.status",
    "fem.iterations",
    "fem.reason",
    "measurements",
    "truth",
];

impl CaseFile {
    pub fn to_text(&self) -> String {
        let mut kv = Vec::new();
        self.spec.write_keys(&mut kv);
        match &self.fem {
            FemStatus::Ok { iterations } => {
                kv.push(("fem.status".into(), "ok".into()));
                kv.push(("fem.iterations".into(), iterations.to_string()));
            }
            FemStatus::Unavailable { reason } => {
                kv.push(("fem.status".into(), "unavailable".into()));
                kv.push(("fem.reason".into(), reason.replace(['\n', '#'], " ")));
            }
        }
        if let Some(m) = &self.measurements {
            kv.push(("measurements".into(), m.display().to_string()));
        }
        kv.push(("truth".into(), self.truth.display().to_string()));
        kv.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let kv = KeyValues::parse(text, origin)?;
        kv.check_known(CASE_KEYS)?;
        let format = kv.require("format")?;
        if format != CASE_FORMAT {
            return Err(Error::Parse {
                path: origin.into(),
                line: kv.line("format").unwrap_or(1),
                message: format!("unsupported case format `{format}`, expected `{CASE_FORMAT}`"),
            });
        }
        let spec = CaseSpec::from_keys(&kv, "")?;
        let fem = match kv.require("fem.status")? {
            "ok" => FemStatus::Ok {
                iterations: kv.parsed_or("fem.iterations", 0)?,
            },
            "unavailable" => FemStatus::Unavailable {
                reason: kv.get("fem.reason").unwrap_or("").into(),
            },
            other => {
                return Err(Error::Parse {
                    path: origin.into(),
                    line: kv.line("fem.status").unwrap_or(0),
                    message: format!("fem.status must be `ok` or `unavailable`, found `{other}`"),
                })
            }
        };
        Ok(Self {
            spec,
            fem,
            measurements: kv.get("measurements").map(PathBuf::from),
            truth: PathBuf::from(kv.require("truth")?),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut file = Self::parse(&text, &path.display().to_string())?;
        let dir = path.parent().unwrap_or(Path::new(""));
        file.measurements = file.measurements.map(|m| dir.join(m));
        file.truth = dir.join(&file.truth);
        Ok(file)
    }

    pub fn load_measurements(&self) -> Result<MeasurementSet> {
        match (&self.fem, &self.measurements) {
            (FemStatus::Ok { .. }, Some(p)) => MeasurementSet::load(p),
            _ => Err(Error::Config(format!("case `{}` has no measurements", self.spec.id))),
        }
    }
}

/// Solves a case and writes `case.txt`, `measurements.csv`, `truth.csv` and
/// `truth.pgm` into `dir`. A failing Neo-Hookean solve is recorded as
/// unavailable instead of aborting.
pub fn generate_case(spec: &CaseSpec, layout: &MeasurementLayout, raster: usize, dir: &Path) -> Result<CaseFile> {
    spec.validate()?;
    let truth = spec.truth_raster(raster, raster)?;
    let (fem, measurements) = match spec.solve() {
        Ok(sol) => (
            FemStatus::Ok {
                iterations: sol.iterations(),
            },
            Some(spec.measurements(&sol, layout)?),
        ),
        Err(Error::Solver(reason)) if spec.physics() == PhysicsKind::NeoHookean => {
            (FemStatus::Unavailable { reason }, None)
        }
        Err(e) => return Err(e),
    };
    if let Some(m) = &measurements {
        write_atomic(&dir.join("measurements.csv"), m.to_csv().as_bytes())?;
    }
    truth.save_csv(&dir.join("truth.csv"))?;
    write_atomic(&dir.join("truth.pgm"), &truth.to_pgm(0.0, 1.0))?;
    let file = CaseFile {
        spec: spec.clone(),
        fem,
        measurements: measurements.map(|_| PathBuf::from("measurements.csv")),
        truth: PathBuf::from("truth.csv"),
    };
    write_atomic(&dir.join("case.txt"), file.to_text().as_bytes())?;
    CaseFile::load(&dir.join("case.txt"))
}

/// Default raster size for ground truth.
pub const TRUTH_RASTER: usize = DEFAULT_RASTER;

/// Identifiers accepted by [`catalog`].
pub const CATALOG_IDS: [&str; 25] = [
    "1",
    "2",
    "3",
    "4",
    "5",
    "6",
    "7",
    "8",
    "9",
    "10",
    "11",
    "12",
    "13",
    "14",
    "15",
    "16",
    "17",
    "18",
    "19",
    "20",
    "21",
    "22",
    "circle",
    "thermal-insulating",
    "thermal-conducting",
];

/// Predefined cases: the twenty-two matrix and layer experiments, a single
/// centered circular void, and the two thermal experiments.
pub fn catalog(id: &str) -> Result<CaseSpec> {
    use InclusionMaterial as I;
    let le = MatrixMaterial::Linear { e: 1.0, nu: 0.3 };
    let he = MatrixMaterial::NeoHookean { mu: 0.38 };
    let soft = I::Elastic { e: 0.2, nu: 0.3 };
    let stiff = I::Elastic { e: 5.0, nu: 0.3 };
    let two_circles = || {
        ShapeSpec::union(vec![
            ShapeSpec::circle(-0.2, 0.15, 0.12),
            ShapeSpec::circle(0.18, -0.17, 0.1),
        ])
    };
    let star_rect = || {
        ShapeSpec::union(vec![
            ShapeSpec::star(-0.18, 0.12, 0.16, 0.07, 5, 0.3),
            ShapeSpec::rect(0.2, -0.18, 0.12, 0.06, 0.5),
        ])
    };
    let slit = || ShapeSpec::rect(0.0, 0.0, 0.2, 0.02, 0.4);
    let letter_u = || ShapeSpec::letter_u(0.0, 0.0, 0.4, 0.4);
    let letter_t = || ShapeSpec::letter_t(0.0, 0.0, 0.4, 0.4);
    let four_circles = || {
        ShapeSpec::union(
            [(-0.22, -0.22), (0.22, -0.22), (-0.22, 0.22), (0.22, 0.22)]
                .into_iter()
                .map(|(x, y)| ShapeSpec::circle(x, y, 0.1))
                .collect(),
        )
    };
    let mit = || {
        ShapeSpec::union(vec![
            ShapeSpec::letter_m(-0.55, 0.0, 0.4, 0.5),
            ShapeSpec::letter_i(0.0, 0.0, 0.1, 0.5),
            ShapeSpec::letter_t(0.55, 0.0, 0.4, 0.5),
        ])
    };
    let m = ProblemFamily::Matrix;
    let c = |desc: &str, matrix, inclusion, shape| Ok(CaseSpec::new(id, desc, m, matrix, inclusion, shape));
    let thermal = ProblemFamily::Thermal {
        missing: Some(Side::Top),
    };
    let k = MatrixMaterial::Conductor { k: 1.0, t0: 1.0 };
    match id {
        "1" => c("two circles, void", le, I::Void, two_circles()),
        "2" => c("two circles, void, hyperelastic", he, I::Void, two_circles()),
        "3" => c("star and rectangle, void", le, I::Void, star_rect()),
        "4" => c("star and rectangle, soft inclusion", le, soft, star_rect()),
        "5" => c("star and rectangle, stiff inclusion", le, stiff, star_rect()),
        "6" => c("star and rectangle, rigid inclusion", le, I::Rigid, star_rect()),
        "7" => c("star and rectangle, void, hyperelastic", he, I::Void, star_rect()),
        "8" => c("slit, void", le, I::Void, slit()),
        "9" => c("slit, void, hyperelastic", he, I::Void, slit()),
        "10" => c("U, void", le, I::Void, letter_u()),
        "11" => c("U, soft inclusion", le, soft, letter_u()),
        "12" => c("U, stiff inclusion", le, stiff, letter_u()),
        "13" => c("U, rigid inclusion", le, I::Rigid, letter_u()),
        "14" => c("U, void, hyperelastic", he, I::Void, letter_u()),
        "15" => c("T, void", le, I::Void, letter_t()),
        "16" => c("T, void, hyperelastic", he, I::Void, letter_t()),
        "17" => c("four circles, void", le, I::Void, four_circles()),
        "18" => c("four circles, void, hyperelastic", he, I::Void, four_circles()),
        "19" => Ok(CaseSpec::new(
            id,
            "M, I and T, soft inclusions",
            ProblemFamily::WideMatrix,
            le,
            soft,
            mit(),
        )),
        "20" | "21" | "22" => {
            let (desc, shape) = match id {
                "20" => (
                    "sinusoidal substrate",
                    ShapeSpec::Sinusoid {
                        mean: -0.3,
                        amplitude: 0.08,
                        cycles: 2,
                    },
                ),
                "21" => (
                    "pulse substrate",
                    ShapeSpec::Pulse {
                        mean: -0.35,
                        amplitude: 0.15,
                        x0: 0.5,
                        width: 0.1,
                    },
                ),
                _ => (
                    "random wave substrate",
                    ShapeSpec::RandomWave {
                        mean: -0.3,
                        amplitude: 0.1,
                        modes: 5,
                        seed: 7,
                    },
                ),
            };
            Ok(CaseSpec::new(id, desc, ProblemFamily::Layer, le, I::Rigid, shape))
        }
        "circle" => c("centered circular void", le, I::Void, ShapeSpec::circle(0.0, 0.0, 0.15)),
        "thermal-insulating" => Ok(CaseSpec::new(id, "insulating slit", thermal, k, I::Insulating, slit())),
        "thermal-conducting" => Ok(CaseSpec::new(id, "conducting slit", thermal, k, I::Conducting, slit())),
        other => Err(Error::Config(format!(
            "unknown case `{other}`; known cases: {}",
            CATALOG_IDS.join(", ")
        ))),
    }
}
