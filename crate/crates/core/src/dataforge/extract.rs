//! Boundary measurements sampled from forward solutions.
//!
//! Points sit at the midpoints `(i + 1/2) / n` of `n` equal segments of each
//! measured side, so no point falls on a corner. Elastic displacements are
//! stored nondimensional. Thermal sets record the temperature on insulated
//! sides and the normal heat flux on sides with a prescribed temperature.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::elastic::ElasticSolution;
use super::measure::MeasurementSet;
use super::thermal::ThermalSolution;
use crate::error::{Error, Result};
use crate::networks::FieldRole;
use crate::physics::Scales;
use crate::problem::{ProblemFamily, Rect, Side};

/// Absolute distance within which a point counts as lying on a side.
const ON_SIDE_TOL: f64 = 1e-12;

/// Where measurements are taken and how they are perturbed.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementLayout {
    pub points: Vec<[f64; 2]>,
    /// Standard deviation of additive Gaussian noise (nondimensional).
    pub noise_std: f64,
    pub seed: u64,
}

impl MeasurementLayout {
    /// `per_side` equally spaced points on each of `sides`.
    pub fn uniform(domain: Rect, per_side: usize, sides: &[Side]) -> Result<Self> {
        if per_side == 0 || sides.is_empty() {
            return Err(Error::Layout(
                "a layout needs at least one side and one point per side".into(),
            ));
        }
        let mut points = Vec::with_capacity(per_side * sides.len());
        for &side in sides {
            for i in 0..per_side {
                let s = (i as f64 + 0.5) / per_side as f64;
                let along_x = domain.x_min + s * domain.width();
                let along_y = domain.y_min + s * domain.height();
                points.push(match side {
                    Side::Left => [domain.x_min, along_y],
                    Side::Right => [domain.x_max, along_y],
                    Side::Bottom => [along_x, domain.y_min],
                    Side::Top => [along_x, domain.y_max],
                });
            }
        }
        Ok(Self {
            points,
            noise_std: 0.0,
            seed: 0,
        })
    }

    /// 100 points per side on every side with measured data: all four sides
    /// of the matrices, the top of the layer, the known thermal sides.
    pub fn for_family(family: ProblemFamily) -> Result<Self> {
        let sides = match family {
            ProblemFamily::Layer => vec![Side::Top],
            other => other.known_sides(),
        };
        Self::uniform(family.domain(), 100, &sides)
    }

    pub fn with_noise(mut self, std: f64, seed: u64) -> Result<Self> {
        if !(std >= 0.0 && std.is_finite()) {
            return Err(Error::Layout(format!(
                "noise level {std} must be finite and non-negative"
            )));
        }
        self.noise_std = std;
        self.seed = seed;
        Ok(self)
    }

    /// Keeps every `stride`-th point.
    pub fn thinned(mut self, stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(Error::Layout("stride must be positive".into()));
        }
        self.points = self.points.into_iter().step_by(stride).collect();
        Ok(self)
    }

    /// Side carrying each point; fails for points off the boundary.
    pub fn sides(&self, domain: Rect) -> Result<Vec<Side>> {
        self.points.iter().map(|&p| side_of(domain, p)).collect()
    }

    fn perturb(&self, values: &mut [f64]) -> Result<()> {
        if self.noise_std == 0.0 {
            return Ok(());
        }
        let normal = Normal::new(0.0, self.noise_std).map_err(|e| Error::Layout(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for v in values.iter_mut().filter(|v| !v.is_nan()) {
            *v += normal.sample(&mut rng);
        }
        Ok(())
    }
}

fn side_of(d: Rect, p: [f64; 2]) -> Result<Side> {
    let inside = d.contains(p, ON_SIDE_TOL);
    let candidates = [
        (Side::Left, (p[0] - d.x_min).abs()),
        (Side::Right, (p[0] - d.x_max).abs()),
        (Side::Bottom, (p[1] - d.y_min).abs()),
        (Side::Top, (p[1] - d.y_max).abs()),
    ];
    match candidates.iter().find(|(_, dist)| *dist <= ON_SIDE_TOL) {
        Some((side, _)) if inside => Ok(*side),
        _ => Err(Error::Layout(format!(
            "point ({}, {}) is not on the boundary of the domain",
            p[0], p[1]
        ))),
    }
}

/// Nondimensional displacements `u1, u2` at the layout points.
pub fn extract_elastic(sol: &ElasticSolution, layout: &MeasurementLayout, scales: &Scales) -> Result<MeasurementSet> {
    layout.sides(sol.grid.domain)?;
    let mut values = Vec::with_capacity(2 * layout.points.len());
    for &p in &layout.points {
        let u = sol.displacement_at(p)?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Layout(format!(
                "point ({}, {}) is not on solid material",
                p[0], p[1]
            )));
        }
        values.extend(u.map(|c| scales.disp_to_nd(c)));
    }
    layout.perturb(&mut values)?;
    MeasurementSet::new(layout.points.clone(), vec![FieldRole::U1, FieldRole::U2], values)
}

/// Temperature on sides without a prescribed temperature and the normal
/// heat flux on sides with one, as columns `T, q1, q2`.
pub fn extract_thermal(
    sol: &ThermalSolution,
    layout: &MeasurementLayout,
    dirichlet: &[Side],
) -> Result<MeasurementSet> {
    let sides = layout.sides(sol.grid.domain)?;
    let mut values = Vec::with_capacity(3 * layout.points.len());
    for (&p, side) in layout.points.iter().zip(sides) {
        let mut row = [f64::NAN; 3];
        if dirichlet.contains(&side) {
            let q = boundary_flux(sol, p, side)?;
            match side {
                Side::Left | Side::Right => row[1] = q[0],
                Side::Bottom | Side::Top => row[2] = q[1],
            }
        } else {
            row[0] = sol.temperature_at(p)?;
        }
        if row.iter().all(|v| v.is_nan()) || row.iter().any(|v| v.is_infinite()) {
            return Err(Error::Layout(format!(
                "point ({}, {}) is not on conducting material",
                p[0], p[1]
            )));
        }
        values.extend(row);
    }
    layout.perturb(&mut values)?;
    MeasurementSet::new(
        layout.points.clone(),
        vec![FieldRole::Temperature, FieldRole::Q1, FieldRole::Q2],
        values,
    )
}

/// Flux on a side, extrapolated from the first two element layers to second
/// order in the mesh size.
fn boundary_flux(sol: &ThermalSolution, p: [f64; 2], side: Side) -> Result<[f64; 2]> {
    let (hx, hy) = (sol.grid.hx(), sol.grid.hy());
    let inward = match side {
        Side::Left => [hx, 0.0],
        Side::Right => [-hx, 0.0],
        Side::Bottom => [0.0, hy],
        Side::Top => [0.0, -hy],
    };
    let at = |k: f64| sol.flux_at([p[0] + k * inward[0], p[1] + k * inward[1]]);
    let (q1, q2) = (at(0.5)?, at(1.5)?);
    Ok([1.5 * q1[0] - 0.5 * q2[0], 1.5 * q1[1] - 0.5 * q2[1]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_counts() {
        assert_eq!(
            MeasurementLayout::for_family(ProblemFamily::Matrix)
                .unwrap()
                .points
                .len(),
            400
        );
        assert_eq!(
            MeasurementLayout::for_family(ProblemFamily::WideMatrix)
                .unwrap()
                .points
                .len(),
            400
        );
        assert_eq!(
            MeasurementLayout::for_family(ProblemFamily::Layer)
                .unwrap()
                .points
                .len(),
            100
        );
        let th = ProblemFamily::Thermal {
            missing: Some(Side::Top),
        };
        assert_eq!(MeasurementLayout::for_family(th).unwrap().points.len(), 300);
    }

    #[test]
    fn points_lie_on_their_sides() {
        let d = ProblemFamily::Matrix.domain();
        let l = MeasurementLayout::uniform(d, 4, &[Side::Left, Side::Top]).unwrap();
        assert_eq!(l.points[0], [-0.5, -0.375]);
        assert_eq!(l.points[7], [0.375, 0.5]);
        assert_eq!(l.sides(d).unwrap()[5], Side::Top);
    }

    #[test]
    fn interior_point_is_a_layout_error() {
        let d = ProblemFamily::Matrix.domain();
        let l = MeasurementLayout {
            points: vec![[0.0, 0.1]],
            noise_std: 0.0,
            seed: 0,
        };
        assert!(matches!(l.sides(d), Err(Error::Layout(_))));
        let outside = MeasurementLayout {
            points: vec![[0.7, 0.5]],
            ..l
        };
        assert!(matches!(outside.sides(d), Err(Error::Layout(_))));
    }

    #[test]
    fn negative_noise_rejected() {
        let l = MeasurementLayout::for_family(ProblemFamily::Layer).unwrap();
        assert!(l.with_noise(-1.0, 3).is_err());
    }
}
