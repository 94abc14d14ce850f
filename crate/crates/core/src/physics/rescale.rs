//! Conversion between physical and nondimensional quantities.
//!
//! Lengths are divided by `L`, stresses and tractions by `P_o`, displacements
//! by `L P_o / E`. Hyperelastic cases use the equivalent modulus `E = 3 mu`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scales {
    pub length: f64,
    pub load: f64,
    pub modulus: f64,
}

impl Scales {
    pub fn new(length: f64, load: f64, modulus: f64) -> Result<Self> {
        for (name, v) in [("length", length), ("load", load), ("modulus", modulus)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} scale must be positive, got {v}")));
            }
        }
        Ok(Self { length, load, modulus })
    }

    /// Scales of a Neo-Hookean case with shear modulus `mu` loaded at
    /// `P_o = load_ratio * 3 mu`.
    pub fn hyperelastic(length: f64, mu: f64, load_ratio: f64) -> Result<Self> {
        let e = 3.0 * mu;
        Self::new(length, load_ratio * e, e)
    }

    /// `P_o / E`, the ratio between nondimensional and physical strains.
    pub fn strain(&self) -> f64 {
        self.load / self.modulus
    }

    pub fn length_to_nd(&self, x: f64) -> f64 {
        x / self.length
    }

    pub fn length_from_nd(&self, x: f64) -> f64 {
        x * self.length
    }

    pub fn stress_to_nd(&self, s: f64) -> f64 {
        s / self.load
    }

    pub fn stress_from_nd(&self, s: f64) -> f64 {
        s * self.load
    }

    pub fn disp_to_nd(&self, u: f64) -> f64 {
        u * self.modulus / (self.length * self.load)
    }

    pub fn disp_from_nd(&self, u: f64) -> f64 {
        u * self.length * self.load / self.modulus
    }

    /// A linear modulus in nondimensional units.
    pub fn modulus_to_nd(&self, e: f64) -> f64 {
        e / self.modulus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displacement_ratio() {
        let s = Scales::new(2.0, 0.01, 1.0).unwrap();
        assert!((s.disp_to_nd(0.0182) - 0.91).abs() < 1e-12);
    }

    #[test]
    fn hyperelastic_equivalent_modulus() {
        let s = Scales::hyperelastic(1.0, 0.38, 0.173).unwrap();
        assert!((s.modulus - 1.14).abs() < 1e-12);
        assert!((s.load - 0.19722).abs() < 1e-12);
    }

    #[test]
    fn round_trips() {
        let s = Scales::new(1.3, 0.07, 2.5).unwrap();
        for x in [0.0, 1e-3, 0.37, -12.5] {
            assert!((s.length_from_nd(s.length_to_nd(x)) - x).abs() <= 1e-15 * x.abs().max(1.0));
            assert!((s.stress_from_nd(s.stress_to_nd(x)) - x).abs() <= 1e-15 * x.abs().max(1.0));
            assert!((s.disp_from_nd(s.disp_to_nd(x)) - x).abs() <= 1e-15 * x.abs().max(1.0));
        }
    }

    #[test]
    fn nonpositive_scales_rejected() {
        assert!(matches!(Scales::new(0.0, 1.0, 1.0), Err(Error::Config(_))));
        assert!(matches!(Scales::new(1.0, -1.0, 1.0), Err(Error::Config(_))));
    }
}
