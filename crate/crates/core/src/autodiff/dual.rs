//! Forward-mode first derivatives with respect to the two spatial inputs.
//!
//! [`SpatialDual`] is generic over the carrier [`Scalar`], so the same field
//! transforms and PDE residuals run on plain `f64` at single points and on
//! batched tape variables during training.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::tape::{guard_nonzero, sigmoid, UnaryKind, Var};

/// Arithmetic carrier for [`SpatialDual`] components.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// A constant with the same layout as `self`.
    fn constant_like(self, c: f64) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn sigmoid(self) -> Self;
    fn square(self) -> Self {
        self * self
    }
    /// `self^p`; repeated products for integral `p`, `exp(p ln x)` otherwise.
    fn powf(self, p: f64) -> Self {
        if p.fract() == 0.0 && (1.0..=16.0).contains(&p) {
            let mut acc = self;
            for _ in 1..p as usize {
                acc = acc * self;
            }
            acc
        } else {
            (self.ln() * p).exp()
        }
    }
    /// Shifts values closer than `eps` to zero away from it, with unit slope.
    fn guard_nonzero(self, eps: f64) -> Self;
    /// Number of entries with `|x| < eps`.
    fn count_small(self, eps: f64) -> usize;
}

impl Scalar for f64 {
    fn constant_like(self, c: f64) -> Self {
        c
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sigmoid(self) -> Self {
        sigmoid(self)
    }
    fn guard_nonzero(self, eps: f64) -> Self {
        guard_nonzero(self, eps)
    }
    fn count_small(self, eps: f64) -> usize {
        usize::from(self.abs() < eps)
    }
}

impl Scalar for Var<'_> {
    fn constant_like(self, c: f64) -> Self {
        self.filled_like(c)
    }
    fn sin(self) -> Self {
        self.unary(UnaryKind::Sin)
    }
    fn cos(self) -> Self {
        self.unary(UnaryKind::Cos)
    }
    fn exp(self) -> Self {
        self.unary(UnaryKind::Exp)
    }
    fn ln(self) -> Self {
        self.unary(UnaryKind::Ln)
    }
    fn sqrt(self) -> Self {
        self.unary(UnaryKind::Sqrt)
    }
    fn sigmoid(self) -> Self {
        self.unary(UnaryKind::Sigmoid)
    }
    fn square(self) -> Self {
        self.unary(UnaryKind::Square)
    }
    fn guard_nonzero(self, eps: f64) -> Self {
        self.unary(UnaryKind::GuardNonzero(eps))
    }
    fn count_small(self, eps: f64) -> usize {
        self.value_ref().data().iter().filter(|v| v.abs() < eps).count()
    }
}

/// A value with its derivatives along x1 and x2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialDual<S> {
    pub value: S,
    pub dx1: S,
    pub dx2: S,
}

impl<S: Scalar> SpatialDual<S> {
    pub fn new(value: S, dx1: S, dx2: S) -> Self {
        Self { value, dx1, dx2 }
    }

    /// A quantity that does not vary in space.
    pub fn constant(value: S) -> Self {
        let zero = value.constant_like(0.0);
        Self::new(value, zero, zero)
    }

    /// The coordinate x1 seeded with derivative (1, 0).
    pub fn seed_x1(x1: S) -> Self {
        Self::new(x1, x1.constant_like(1.0), x1.constant_like(0.0))
    }

    /// The coordinate x2 seeded with derivative (0, 1).
    pub fn seed_x2(x2: S) -> Self {
        Self::new(x2, x2.constant_like(0.0), x2.constant_like(1.0))
    }

    /// Returns `(value, d/dx1, d/dx2)`.
    pub fn parts(self) -> (S, S, S) {
        (self.value, self.dx1, self.dx2)
    }

    fn chain(self, f: S, df: S) -> Self {
        Self::new(f, df * self.dx1, df * self.dx2)
    }

    pub fn sin(self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }

    pub fn cos(self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e)
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, (s * 2.0).constant_like(1.0) / (s * 2.0))
    }

    pub fn sigmoid(self) -> Self {
        let s = self.value.sigmoid();
        let ds = s * ((-s) + 1.0);
        self.chain(s, ds)
    }

    pub fn square(self) -> Self {
        self.chain(self.value.square(), self.value * 2.0)
    }

    /// Squared norm of the spatial gradient.
    pub fn grad_norm_sq(self) -> S {
        self.dx1.square() + self.dx2.square()
    }
}

impl<S: Scalar> Add for SpatialDual<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.value + o.value, self.dx1 + o.dx1, self.dx2 + o.dx2)
    }
}

impl<S: Scalar> Sub for SpatialDual<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.value - o.value, self.dx1 - o.dx1, self.dx2 - o.dx2)
    }
}

impl<S: Scalar> Mul for SpatialDual<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.value * o.value,
            self.dx1 * o.value + self.value * o.dx1,
            self.dx2 * o.value + self.value * o.dx2,
        )
    }
}

impl<S: Scalar> Div for SpatialDual<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.value / o.value;
        Self::new(q, (self.dx1 - q * o.dx1) / o.value, (self.dx2 - q * o.dx2) / o.value)
    }
}

impl<S: Scalar> Neg for SpatialDual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.dx1, -self.dx2)
    }
}

impl<S: Scalar> Add<f64> for SpatialDual<S> {
    type Output = Self;
    fn add(self, c: f64) -> Self {
        Self::new(self.value + c, self.dx1, self.dx2)
    }
}

impl<S: Scalar> Sub<f64> for SpatialDual<S> {
    type Output = Self;
    fn sub(self, c: f64) -> Self {
        Self::new(self.value - c, self.dx1, self.dx2)
    }
}

impl<S: Scalar> Mul<f64> for SpatialDual<S> {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Self::new(self.value * c, self.dx1 * c, self.dx2 * c)
    }
}

impl<S: Scalar> Div<f64> for SpatialDual<S> {
    type Output = Self;
    fn div(self, c: f64) -> Self {
        Self::new(self.value / c, self.dx1 / c, self.dx2 / c)
    }
}

/// Evaluates `f` at `(x1, x2)` with seeded duals.
pub fn spatial_derivatives(
    f: impl Fn(SpatialDual<f64>, SpatialDual<f64>) -> SpatialDual<f64>,
    x1: f64,
    x2: f64,
) -> (f64, f64, f64) {
    f(SpatialDual::seed_x1(x1), SpatialDual::seed_x2(x2)).parts()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64, f64) -> f64, x1: f64, x2: f64) -> (f64, f64) {
        let h = 1e-6;
        (
            (f(x1 + h, x2) - f(x1 - h, x2)) / (2.0 * h),
            (f(x1, x2 + h) - f(x1, x2 - h)) / (2.0 * h),
        )
    }

    #[test]
    fn sine_of_x1_at_origin() {
        assert_eq!(spatial_derivatives(|x, _| x.sin(), 0.0, 0.0), (0.0, 1.0, 0.0));
    }

    #[test]
    fn product_of_coordinates() {
        assert_eq!(spatial_derivatives(|x, y| x * y, 2.0, 3.0), (6.0, 3.0, 2.0));
    }

    #[test]
    fn composite_matches_finite_differences() {
        let dual = |x: SpatialDual<f64>, y: SpatialDual<f64>| {
            ((x * y).sin() + (x.square() + 1.0).sqrt()) / (y.exp() + 2.0) - (x * 3.0).sigmoid()
        };
        let plain = |x: f64, y: f64| ((x * y).sin() + (x * x + 1.0).sqrt()) / (y.exp() + 2.0) - sigmoid(3.0 * x);
        for &(a, b) in &[(0.3, -0.7), (1.2, 0.4), (-0.9, 0.05)] {
            let (_, d1, d2) = spatial_derivatives(dual, a, b);
            let (f1, f2) = fd(plain, a, b);
            assert!((d1 - f1).abs() < 1e-8, "{d1} vs {f1}");
            assert!((d2 - f2).abs() < 1e-8, "{d2} vs {f2}");
        }
    }

    #[test]
    fn sigmoid_dual_obeys_logistic_derivative() {
        let delta = 0.01;
        for i in 0..100 {
            let phi0 = -0.05 + 0.001 * i as f64;
            let phi = SpatialDual::new(phi0, 0.7, -1.3);
            let rho = (phi / delta).sigmoid();
            let k = rho.value * (1.0 - rho.value) / delta;
            assert!((rho.dx1 - k * 0.7).abs() <= 1e-12);
            assert!((rho.dx2 + k * 1.3).abs() <= 1e-12);
        }
    }
}
