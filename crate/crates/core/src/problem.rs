//! Problem families: domain geometry, loading direction and physics kind.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Axis-aligned rectangle `[x_min, x_max] x [y_min, y_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub const fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn contains(&self, x: [f64; 2], tol: f64) -> bool {
        x[0] >= self.x_min - tol && x[0] <= self.x_max + tol && x[1] >= self.y_min - tol && x[1] <= self.y_max + tol
    }
}

/// One side of a rectangular domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Bottom => "bottom",
            Side::Top => "top",
        }
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            "bottom" => Ok(Side::Bottom),
            "top" => Ok(Side::Top),
            other => Err(Error::Config(format!("unknown side `{other}`"))),
        }
    }
}

/// Which boundary-value problem is being inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemFamily {
    /// Square matrix `[-0.5, 0.5]^2` pulled along x1 on the left and right sides.
    Matrix,
    /// Rectangular matrix `[-1, 1] x [-0.5, 0.5]` pulled along x2 on top and bottom.
    WideMatrix,
    /// Periodic layer `[0, 1] x [-0.5, 0]` pressed on top, fixed at the bottom.
    Layer,
    /// Square conductor `[-0.5, 0.5]^2` with unit temperature on the left,
    /// zero on the right and insulated top and bottom. `missing` names a side
    /// whose boundary condition and measurements are unavailable.
    Thermal { missing: Option<Side> },
}

impl ProblemFamily {
    pub fn domain(&self) -> Rect {
        match self {
            ProblemFamily::Matrix | ProblemFamily::Thermal { .. } => Rect::new(-0.5, 0.5, -0.5, 0.5),
            ProblemFamily::WideMatrix => Rect::new(-1.0, 1.0, -0.5, 0.5),
            ProblemFamily::Layer => Rect::new(0.0, 1.0, -0.5, 0.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProblemFamily::Matrix => "matrix",
            ProblemFamily::WideMatrix => "wide-matrix",
            ProblemFamily::Layer => "layer",
            ProblemFamily::Thermal { .. } => "thermal",
        }
    }

    /// Sides on which the boundary condition is known.
    pub fn known_sides(&self) -> Vec<Side> {
        match self {
            ProblemFamily::Thermal { missing: Some(m) } => Side::ALL.iter().copied().filter(|s| s != m).collect(),
            _ => Side::ALL.to_vec(),
        }
    }

    pub fn side_known(&self, side: Side) -> bool {
        !matches!(self, ProblemFamily::Thermal { missing: Some(m) } if *m == side)
    }
}

impl fmt::Display for ProblemFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemFamily::Thermal { missing: Some(s) } => write!(f, "thermal:{}", s.name()),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for ProblemFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "matrix" => Ok(ProblemFamily::Matrix),
            "wide-matrix" => Ok(ProblemFamily::WideMatrix),
            "layer" => Ok(ProblemFamily::Layer),
            "thermal" => Ok(ProblemFamily::Thermal { missing: None }),
            other => match other.strip_prefix("thermal:") {
                Some(side) => Ok(ProblemFamily::Thermal {
                    missing: Some(side.parse()?),
                }),
                None => Err(Error::Config(format!("unknown problem family `{other}`"))),
            },
        }
    }
}

/// Governing physics of a case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhysicsKind {
    LinearElastic,
    NeoHookean,
    Thermal,
}

impl PhysicsKind {
    pub fn name(self) -> &'static str {
        match self {
            PhysicsKind::LinearElastic => "linear-elastic",
            PhysicsKind::NeoHookean => "neo-hookean",
            PhysicsKind::Thermal => "thermal",
        }
    }
}

impl FromStr for PhysicsKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "linear-elastic" => Ok(PhysicsKind::LinearElastic),
            "neo-hookean" => Ok(PhysicsKind::NeoHookean),
            "thermal" => Ok(PhysicsKind::Thermal),
            other => Err(Error::Config(format!("unknown physics `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_parse_back() {
        for fam in [
            ProblemFamily::Matrix,
            ProblemFamily::WideMatrix,
            ProblemFamily::Layer,
            ProblemFamily::Thermal { missing: None },
            ProblemFamily::Thermal {
                missing: Some(Side::Right),
            },
        ] {
            assert_eq!(fam.to_string().parse::<ProblemFamily>().unwrap(), fam);
        }
        assert!("disk".parse::<ProblemFamily>().is_err());
    }

    #[test]
    fn missing_side_is_not_known() {
        let fam = ProblemFamily::Thermal {
            missing: Some(Side::Top),
        };
        assert_eq!(fam.known_sides(), vec![Side::Left, Side::Right, Side::Bottom]);
        assert!(!fam.side_known(Side::Top));
    }
}
