//! Synthetic ground truth: shapes, FEM forward solves, measurements and cases.

mod case;
mod elastic;
mod extract;
mod grid;
mod measure;
mod shapes;
mod sparse;
mod thermal;

pub use case::{
    catalog, generate_case, CaseFile, CaseSolution, CaseSpec, FemStatus, InclusionMaterial, MatrixMaterial,
    CASE_FORMAT, CATALOG_IDS, HYPER_LOAD_RATIO, LINEAR_LOAD_RATIO, TRUTH_RASTER,
};
pub use elastic::{solve_linear, solve_neo_hookean, ElasticPhase, ElasticProblem, ElasticSolution, NeoHookeanOptions};
pub use extract::{extract_elastic, extract_thermal, MeasurementLayout};
pub use grid::{Grid, DEFAULT_RESOLUTION};
pub use measure::MeasurementSet;
pub use shapes::ShapeSpec;
pub use sparse::Assembler;
pub use thermal::{solve_thermal, ThermalPhase, ThermalProblem, ThermalSolution};
