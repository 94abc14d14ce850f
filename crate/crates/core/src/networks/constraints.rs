//! Output transforms that make the raw network fields satisfy the boundary
//! conditions identically.
//!
//! Each transform multiplies the raw output by a function vanishing on the
//! constrained sides and adds a particular solution of the boundary values.

use std::fmt;
use std::str::FromStr;

use crate::autodiff::{Scalar, SpatialDual};
use crate::error::Error;
use crate::problem::{PhysicsKind, ProblemFamily, Rect, Side};

/// The physical quantity a network represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldRole {
    U1,
    U2,
    /// Cauchy stress `sigma_11` or first Piola-Kirchhoff `S_11`.
    S11,
    S22,
    S12,
    /// `S_21`; only the non-symmetric hyperelastic stress has it.
    S21,
    Pressure,
    Temperature,
    Q1,
    Q2,
    Phi,
}

impl FieldRole {
    pub const COUNT: usize = 11;

    pub const ALL: [FieldRole; FieldRole::COUNT] = [
        FieldRole::U1,
        FieldRole::U2,
        FieldRole::S11,
        FieldRole::S22,
        FieldRole::S12,
        FieldRole::S21,
        FieldRole::Pressure,
        FieldRole::Temperature,
        FieldRole::Q1,
        FieldRole::Q2,
        FieldRole::Phi,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldRole::U1 => "u1",
            FieldRole::U2 => "u2",
            FieldRole::S11 => "s11",
            FieldRole::S22 => "s22",
            FieldRole::S12 => "s12",
            FieldRole::S21 => "s21",
            FieldRole::Pressure => "p",
            FieldRole::Temperature => "T",
            FieldRole::Q1 => "q1",
            FieldRole::Q2 => "q2",
            FieldRole::Phi => "phi",
        }
    }

    /// Physical-quantity networks for a physics kind, without the level set.
    pub fn state_roles(physics: PhysicsKind) -> &'static [FieldRole] {
        match physics {
            PhysicsKind::LinearElastic => &[
                FieldRole::U1,
                FieldRole::U2,
                FieldRole::S11,
                FieldRole::S22,
                FieldRole::S12,
            ],
            PhysicsKind::NeoHookean => &[
                FieldRole::U1,
                FieldRole::U2,
                FieldRole::S11,
                FieldRole::S22,
                FieldRole::S12,
                FieldRole::S21,
                FieldRole::Pressure,
            ],
            PhysicsKind::Thermal => &[FieldRole::Temperature, FieldRole::Q1, FieldRole::Q2],
        }
    }
}

impl fmt::Display for FieldRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FieldRole {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        FieldRole::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown field `{s}`")))
    }
}

/// Scalars the transforms close over.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformParams {
    /// Applied traction magnitude `P_o` (nondimensional).
    pub load: f64,
    /// Narrow-band width `w`; the level set equals `w` on solid boundaries.
    pub band: f64,
}

/// `(s - a)(s - b)`, vanishing at both ends of an interval.
fn bubble<S: Scalar>(s: SpatialDual<S>, a: f64, b: f64) -> SpatialDual<S> {
    (s - a) * (s - b)
}

/// Applies the hard-constraint transform of `role` to the raw output `raw`
/// at coordinates `(x1, x2)`.
pub fn apply_transform<S: Scalar>(
    family: ProblemFamily,
    physics: PhysicsKind,
    role: FieldRole,
    x1: SpatialDual<S>,
    x2: SpatialDual<S>,
    raw: SpatialDual<S>,
    tp: TransformParams,
) -> SpatialDual<S> {
    let Rect {
        x_min,
        x_max,
        y_min,
        y_max,
    } = family.domain();
    let gx = || bubble(x1, x_min, x_max);
    let gy = || bubble(x2, y_min, y_max);
    match family {
        ProblemFamily::Matrix | ProblemFamily::WideMatrix => {
            // Square matrix is pulled along x1, the wide one along x2.
            let pull_x = family == ProblemFamily::Matrix;
            match (physics, role) {
                (_, FieldRole::U1 | FieldRole::U2 | FieldRole::Pressure) => raw,
                (_, FieldRole::S11) => {
                    let t = gx() * raw;
                    if pull_x {
                        t + tp.load
                    } else {
                        t
                    }
                }
                (_, FieldRole::S22) => {
                    let t = gy() * raw;
                    if pull_x {
                        t
                    } else {
                        t + tp.load
                    }
                }
                (PhysicsKind::NeoHookean, FieldRole::S12) => gy() * raw,
                (PhysicsKind::NeoHookean, FieldRole::S21) => gx() * raw,
                (_, FieldRole::S12) => gx() * gy() * raw,
                (_, FieldRole::Phi) => gx() * gy() * raw + tp.band,
                _ => raw,
            }
        }
        ProblemFamily::Layer => match role {
            FieldRole::U1 | FieldRole::U2 => (x2 - y_min) * raw,
            FieldRole::S22 => x2 * raw - tp.load,
            FieldRole::S12 => x2 * raw,
            FieldRole::Phi => x2 * (x2 - y_min) * raw + (x2 * 4.0 + 1.0) * tp.band,
            _ => raw,
        },
        ProblemFamily::Thermal { missing } => {
            let known = |s: Side| missing != Some(s);
            match role {
                FieldRole::Temperature => match (known(Side::Left), known(Side::Right)) {
                    // T = 1 on the left, 0 on the right.
                    (true, true) => gx() * raw - (x1 - x_max),
                    (true, false) => (x1 - x_min) * raw + 1.0,
                    (false, true) => (x1 - x_max) * raw,
                    (false, false) => raw,
                },
                FieldRole::Q2 => match (known(Side::Bottom), known(Side::Top)) {
                    (true, true) => gy() * raw,
                    (true, false) => (x2 - y_min) * raw,
                    (false, true) => (x2 - y_max) * raw,
                    (false, false) => raw,
                },
                FieldRole::Phi => gx() * gy() * raw + tp.band,
                _ => raw,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TP: TransformParams = TransformParams { load: 1.0, band: 0.1 };

    fn eval(family: ProblemFamily, physics: PhysicsKind, role: FieldRole, x: [f64; 2], raw: f64) -> f64 {
        apply_transform(
            family,
            physics,
            role,
            SpatialDual::seed_x1(x[0]),
            SpatialDual::seed_x2(x[1]),
            SpatialDual::new(raw, 0.3, -0.2),
            TP,
        )
        .value
    }

    #[test]
    fn matrix_traction_on_loaded_side() {
        let v = eval(
            ProblemFamily::Matrix,
            PhysicsKind::LinearElastic,
            FieldRole::S11,
            [0.5, 0.13],
            7.3,
        );
        assert_eq!(v, TP.load);
    }

    #[test]
    fn layer_level_set_edges() {
        let lin = PhysicsKind::LinearElastic;
        assert_eq!(
            eval(ProblemFamily::Layer, lin, FieldRole::Phi, [0.37, 0.0], 2.0),
            TP.band
        );
        assert_eq!(
            eval(ProblemFamily::Layer, lin, FieldRole::Phi, [0.37, -0.5], 2.0),
            -TP.band
        );
    }

    #[test]
    fn thermal_dirichlet_values() {
        let fam = ProblemFamily::Thermal { missing: None };
        let th = PhysicsKind::Thermal;
        assert_eq!(eval(fam, th, FieldRole::Temperature, [-0.5, 0.2], 3.0), 1.0);
        assert_eq!(eval(fam, th, FieldRole::Temperature, [0.5, 0.2], 3.0), 0.0);
        assert_eq!(eval(fam, th, FieldRole::Q2, [0.1, 0.5], 3.0), 0.0);
        let fam = ProblemFamily::Thermal {
            missing: Some(Side::Right),
        };
        assert_eq!(eval(fam, th, FieldRole::Temperature, [-0.5, 0.2], 3.0), 1.0);
        assert_ne!(eval(fam, th, FieldRole::Temperature, [0.5, 0.2], 3.0), 0.0);
    }

    #[test]
    fn roles_parse_back() {
        for r in FieldRole::ALL {
            assert_eq!(r.name().parse::<FieldRole>().unwrap(), r);
        }
    }
}
