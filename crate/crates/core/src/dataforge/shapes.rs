//! Signed-distance descriptions of hidden inclusions and substrates.
//!
//! Every shape is negative inside, positive outside and zero on its boundary.
//! Circles, boxes and polygons are exact; unions and differences keep the
//! sign exact and bound the distance. Graph regions `y < f(x)` are scaled by
//! the slope bound of `f`, so their magnitude never exceeds the true distance.
//!
//! Shapes have a compact text form used in case files:
//!
//! ```text
//! union(circle(-0.2, 0.15, 0.12), rect(0.2, -0.18, 0.12, 0.06, 0.5))
//! ```

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum ShapeSpec {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    /// Box with half extents `half`, rotated by `angle` radians.
    Rect {
        center: [f64; 2],
        half: [f64; 2],
        angle: f64,
    },
    /// Simple polygon given by its vertices in order.
    Polygon(Vec<[f64; 2]>),
    /// Star polygon with `points` tips between radii `inner` and `outer`.
    Star {
        center: [f64; 2],
        outer: f64,
        inner: f64,
        points: usize,
        angle: f64,
    },
    Union(Vec<ShapeSpec>),
    /// Points of the first shape not in the second.
    Difference(Box<ShapeSpec>, Box<ShapeSpec>),
    /// Region `y < mean + amplitude sin(2 pi cycles x)`.
    Sinusoid {
        mean: f64,
        amplitude: f64,
        cycles: u32,
    },
    /// Region below a Gaussian bump centered at `x0`, periodic with period 1.
    Pulse {
        mean: f64,
        amplitude: f64,
        x0: f64,
        width: f64,
    },
    /// Region below a seeded sum of `modes` periodic harmonics, scaled so the
    /// interface stays within `mean +- amplitude`.
    RandomWave {
        mean: f64,
        amplitude: f64,
        modes: u32,
        seed: u64,
    },
}

impl ShapeSpec {
    pub fn circle(x: f64, y: f64, r: f64) -> Self {
        ShapeSpec::Circle {
            center: [x, y],
            radius: r,
        }
    }

    pub fn rect(x: f64, y: f64, half_w: f64, half_h: f64, angle: f64) -> Self {
        ShapeSpec::Rect {
            center: [x, y],
            half: [half_w, half_h],
            angle,
        }
    }

    pub fn star(x: f64, y: f64, outer: f64, inner: f64, points: usize, angle: f64) -> Self {
        ShapeSpec::Star {
            center: [x, y],
            outer,
            inner,
            points,
            angle,
        }
    }

    /// Polygon from vertices in the unit square, scaled by `size` and
    /// centered at `(x, y)`.
    fn glyph(unit: &[[f64; 2]], x: f64, y: f64, size: [f64; 2]) -> Self {
        ShapeSpec::Polygon(
            unit.iter()
                .map(|v| [x + (v[0] - 0.5) * size[0], y + (v[1] - 0.5) * size[1]])
                .collect(),
        )
    }

    /// Upright U of width `w`, height `h`, opening upwards.
    pub fn letter_u(x: f64, y: f64, w: f64, h: f64) -> Self {
        const U: [[f64; 2]; 8] = [
            [0.0, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.75, 1.0],
            [0.75, 0.3],
            [0.25, 0.3],
            [0.25, 1.0],
            [0.0, 1.0],
        ];
        Self::glyph(&U, x, y, [w, h])
    }

    pub fn letter_t(x: f64, y: f64, w: f64, h: f64) -> Self {
        const T: [[f64; 2]; 8] = [
            [0.35, 0.0],
            [0.65, 0.0],
            [0.65, 0.75],
            [1.0, 0.75],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.0, 0.75],
            [0.35, 0.75],
        ];
        Self::glyph(&T, x, y, [w, h])
    }

    pub fn letter_m(x: f64, y: f64, w: f64, h: f64) -> Self {
        const M: [[f64; 2]; 12] = [
            [0.0, 0.0],
            [0.2, 0.0],
            [0.2, 0.6],
            [0.5, 0.25],
            [0.8, 0.6],
            [0.8, 0.0],
            [1.0, 0.0],
            [1.0, 1.0],
            [0.8, 1.0],
            [0.5, 0.6],
            [0.2, 1.0],
            [0.0, 1.0],
        ];
        Self::glyph(&M, x, y, [w, h])
    }

    pub fn letter_i(x: f64, y: f64, w: f64, h: f64) -> Self {
        Self::rect(x, y, w / 2.0, h / 2.0, 0.0)
    }

    pub fn union(parts: Vec<ShapeSpec>) -> Self {
        ShapeSpec::Union(parts)
    }

    pub fn difference(a: ShapeSpec, b: ShapeSpec) -> Self {
        ShapeSpec::Difference(Box::new(a), Box::new(b))
    }

    /// Checks parameters for degenerate geometry.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("invalid shape `{self}`: {what}")));
        match self {
            ShapeSpec::Circle { radius, .. } if !(*radius > 0.0) => bad("radius must be positive"),
            ShapeSpec::Rect { half, .. } if !(half[0] > 0.0 && half[1] > 0.0) => bad("half extents must be positive"),
            ShapeSpec::Polygon(v) if v.len() < 3 => bad("a polygon needs at least three vertices"),
            ShapeSpec::Star {
                outer, inner, points, ..
            } if !(*inner > 0.0 && inner < outer && *points >= 2) => {
                bad("need 0 < inner < outer and at least two tips")
            }
            ShapeSpec::Union(parts) if parts.is_empty() => bad("empty union"),
            ShapeSpec::Union(parts) => parts.iter().try_for_each(ShapeSpec::validate),
            ShapeSpec::Difference(a, b) => {
                a.validate()?;
                b.validate()
            }
            ShapeSpec::Pulse { width, .. } if !(*width > 0.0) => bad("pulse width must be positive"),
            ShapeSpec::RandomWave { modes, .. } if *modes == 0 => bad("a random wave needs at least one mode"),
            _ => Ok(()),
        }
    }

    /// Signed distance at `x`.
    pub fn sdf(&self, x: [f64; 2]) -> f64 {
        match self {
            ShapeSpec::Circle { center, radius } => {
                ((x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2)).sqrt() - radius
            }
            ShapeSpec::Rect { center, half, angle } => {
                let (s, c) = angle.sin_cos();
                let dx = x[0] - center[0];
                let dy = x[1] - center[1];
                let lx = c * dx + s * dy;
                let ly = -s * dx + c * dy;
                let qx = lx.abs() - half[0];
                let qy = ly.abs() - half[1];
                let outside = (qx.max(0.0).powi(2) + qy.max(0.0).powi(2)).sqrt();
                outside + qx.max(qy).min(0.0)
            }
            ShapeSpec::Polygon(v) => polygon_sdf(v, x),
            ShapeSpec::Star { .. } => polygon_sdf(&self.star_vertices(), x),
            ShapeSpec::Union(parts) => parts.iter().map(|p| p.sdf(x)).fold(f64::INFINITY, f64::min),
            ShapeSpec::Difference(a, b) => a.sdf(x).max(-b.sdf(x)),
            ShapeSpec::Sinusoid { .. } | ShapeSpec::Pulse { .. } | ShapeSpec::RandomWave { .. } => {
                let (f, slope) = self.graph(x[0]);
                (x[1] - f) / (1.0 + slope * slope).sqrt()
            }
        }
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        self.sdf(x) < 0.0
    }

    fn star_vertices(&self) -> Vec<[f64; 2]> {
        let ShapeSpec::Star {
            center,
            outer,
            inner,
            points,
            angle,
        } = self
        else {
            unreachable!("star vertices of a non-star shape")
        };
        (0..2 * points)
            .map(|k| {
                let r = if k % 2 == 0 { *outer } else { *inner };
                let t = angle + PI / 2.0 + k as f64 * PI / *points as f64;
                [center[0] + r * t.cos(), center[1] + r * t.sin()]
            })
            .collect()
    }

    /// Interface height `f(x)` of a graph region and a bound on `|f'|`.
    fn graph(&self, x: f64) -> (f64, f64) {
        match *self {
            ShapeSpec::Sinusoid {
                mean,
                amplitude,
                cycles,
            } => {
                let k = TAU * cycles as f64;
                (mean + amplitude * (k * x).sin(), amplitude.abs() * k)
            }
            ShapeSpec::Pulse {
                mean,
                amplitude,
                x0,
                width,
            } => {
                let d = x - x0 - (x - x0).round();
                let f = mean + amplitude * (-(d / width).powi(2)).exp();
                // max |d/dx exp(-(x/w)^2)| = sqrt(2/e) / w
                (f, amplitude.abs() * (2.0 / std::f64::consts::E).sqrt() / width)
            }
            ShapeSpec::RandomWave {
                mean,
                amplitude,
                modes,
                seed,
            } => {
                let (coef, phase) = wave_modes(modes, seed);
                let norm: f64 = coef.iter().sum();
                let mut f = 0.0;
                let mut slope = 0.0;
                for (k, (a, p)) in coef.iter().zip(&phase).enumerate() {
                    let n = (k + 1) as f64;
                    f += a * (TAU * n * x + p).sin();
                    slope += a * TAU * n;
                }
                (mean + amplitude * f / norm, amplitude.abs() * slope / norm)
            }
            _ => unreachable!("graph of a bounded shape"),
        }
    }
}

/// Amplitudes `~ U(0.2, 1) / k` and phases `~ U(0, 2 pi)` of a random wave.
fn wave_modes(modes: u32, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=modes)
        .map(|k| (rng.random_range(0.2..1.0) / k as f64, rng.random_range(0.0..TAU)))
        .unzip()
}

/// Exact signed distance to a simple polygon.
fn polygon_sdf(v: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let n = v.len();
    let mut d2 = f64::INFINITY;
    let mut inside = false;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        let e = [b[0] - a[0], b[1] - a[1]];
        let w = [p[0] - a[0], p[1] - a[1]];
        let t = ((w[0] * e[0] + w[1] * e[1]) / (e[0] * e[0] + e[1] * e[1])).clamp(0.0, 1.0);
        let q = [w[0] - e[0] * t, w[1] - e[1] * t];
        d2 = d2.min(q[0] * q[0] + q[1] * q[1]);
        if (a[1] > p[1]) != (b[1] > p[1]) && p[0] < a[0] + (p[1] - a[1]) * e[0] / e[1] {
            inside = !inside;
        }
    }
    if inside {
        -d2.sqrt()
    } else {
        d2.sqrt()
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeSpec::Circle { center, radius } => write!(f, "circle({}, {}, {})", center[0], center[1], radius),
            ShapeSpec::Rect { center, half, angle } => {
                write!(
                    f,
                    "rect({}, {}, {}, {}, {})",
                    center[0], center[1], half[0], half[1], angle
                )
            }
            ShapeSpec::Polygon(v) => {
                let coords: Vec<String> = v.iter().map(|p| format!("{}, {}", p[0], p[1])).collect();
                write!(f, "polygon({})", coords.join(", "))
            }
            ShapeSpec::Star {
                center,
                outer,
                inner,
                points,
                angle,
            } => write!(
                f,
                "star({}, {}, {}, {}, {}, {})",
                center[0], center[1], outer, inner, points, angle
            ),
            ShapeSpec::Union(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "union({})", s.join(", "))
            }
            ShapeSpec::Difference(a, b) => write!(f, "difference({a}, {b})"),
            ShapeSpec::Sinusoid {
                mean,
                amplitude,
                cycles,
            } => write!(f, "sinusoid({mean}, {amplitude}, {cycles})"),
            ShapeSpec::Pulse {
                mean,
                amplitude,
                x0,
                width,
            } => write!(f, "pulse({mean}, {amplitude}, {x0}, {width})"),
            ShapeSpec::RandomWave {
                mean,
                amplitude,
                modes,
                seed,
            } => write!(f, "wave({mean}, {amplitude}, {modes}, {seed})"),
        }
    }
}

enum Arg {
    Num(f64),
    Shape(ShapeSpec),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Config(format!("shape syntax error at column {}: {msg}", self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn shape(&mut self) -> Result<ShapeSpec> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        if name.is_empty() {
            return Err(self.err("expected a shape name"));
        }
        if !self.eat(b'(') {
            return Err(self.err("expected `(`"));
        }
        let mut args = Vec::new();
        if !self.eat(b')') {
            loop {
                args.push(self.arg()?);
                if self.eat(b')') {
                    break;
                }
                if !self.eat(b',') {
                    return Err(self.err("expected `,` or `)`"));
                }
            }
        }
        build(name, args).map_err(|m| self.err(&m))
    }

    fn arg(&mut self) -> Result<Arg> {
        self.skip_ws();
        match self.s.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() && !self.s[self.pos..].starts_with(b"inf") => {
                Ok(Arg::Shape(self.shape()?))
            }
            _ => {
                let start = self.pos;
                while self.pos < self.s.len() && !matches!(self.s[self.pos], b',' | b')') {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii").trim();
                text.parse()
                    .map(Arg::Num)
                    .map_err(|_| self.err(&format!("not a number: `{text}`")))
            }
        }
    }
}

fn build(name: &str, args: Vec<Arg>) -> std::result::Result<ShapeSpec, String> {
    let nums = |n: Option<usize>| -> std::result::Result<Vec<f64>, String> {
        let v: Vec<f64> = args
            .iter()
            .map(|a| match a {
                Arg::Num(x) => Ok(*x),
                Arg::Shape(_) => Err(format!("`{name}` takes numbers")),
            })
            .collect::<std::result::Result<_, _>>()?;
        match n {
            Some(n) if v.len() != n => Err(format!("`{name}` takes {n} arguments, found {}", v.len())),
            _ => Ok(v),
        }
    };
    let count = |x: f64| -> std::result::Result<u64, String> {
        if x >= 0.0 && x.fract() == 0.0 {
            Ok(x as u64)
        } else {
            Err(format!("`{name}` expects a whole number, found {x}"))
        }
    };
    let shapes = || -> std::result::Result<Vec<ShapeSpec>, String> {
        args.iter()
            .map(|a| match a {
                Arg::Shape(s) => Ok(s.clone()),
                Arg::Num(_) => Err(format!("`{name}` takes shapes")),
            })
            .collect()
    };
    Ok(match name {
        "circle" => {
            let v = nums(Some(3))?;
            ShapeSpec::circle(v[0], v[1], v[2])
        }
        "rect" => {
            let v = nums(Some(5))?;
            ShapeSpec::rect(v[0], v[1], v[2], v[3], v[4])
        }
        "polygon" => {
            let v = nums(None)?;
            if v.len() % 2 != 0 {
                return Err("polygon takes coordinate pairs".into());
            }
            ShapeSpec::Polygon(v.chunks(2).map(|c| [c[0], c[1]]).collect())
        }
        "star" => {
            let v = nums(Some(6))?;
            ShapeSpec::star(v[0], v[1], v[2], v[3], count(v[4])? as usize, v[5])
        }
        "union" => ShapeSpec::Union(shapes()?),
        "difference" => {
            let mut s = shapes()?;
            if s.len() != 2 {
                return Err("difference takes two shapes".into());
            }
            let b = s.pop().expect("two shapes");
            let a = s.pop().expect("two shapes");
            ShapeSpec::difference(a, b)
        }
        "sinusoid" => {
            let v = nums(Some(3))?;
            ShapeSpec::Sinusoid {
                mean: v[0],
                amplitude: v[1],
                cycles: count(v[2])? as u32,
            }
        }
        "pulse" => {
            let v = nums(Some(4))?;
            ShapeSpec::Pulse {
                mean: v[0],
                amplitude: v[1],
                x0: v[2],
                width: v[3],
            }
        }
        "wave" => {
            let v = nums(Some(4))?;
            ShapeSpec::RandomWave {
                mean: v[0],
                amplitude: v[1],
                modes: count(v[2])? as u32,
                seed: count(v[3])?,
            }
        }
        other => return Err(format!("unknown shape `{other}`")),
    })
}

impl FromStr for ShapeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let shape = p.shape()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing characters"));
        }
        shape.validate()?;
        Ok(shape)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_oracles() {
        let c = ShapeSpec::circle(0.0, 0.0, 0.15);
        assert!((c.sdf([0.0, 0.0]) + 0.15).abs() < 1e-15);
        assert!(c.sdf([0.15, 0.0]).abs() < 1e-15);
    }

    #[test]
    fn slit_box_distance() {
        let s = ShapeSpec::rect(0.0, 0.0, 0.1, 0.02, 0.0);
        assert!((s.sdf([0.0, 0.05]) - 0.03).abs() < 1e-15);
        assert!((s.sdf([0.0, 0.0]) + 0.02).abs() < 1e-15);
        assert!((s.sdf([0.13, 0.06]) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn rotated_box_matches_polygon() {
        let r = ShapeSpec::rect(0.1, -0.05, 0.2, 0.05, 0.7);
        let (s, c) = 0.7f64.sin_cos();
        let corners: Vec<[f64; 2]> = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]
            .iter()
            .map(|q| {
                let (x, y) = (q[0] * 0.2, q[1] * 0.05);
                [0.1 + c * x - s * y, -0.05 + s * x + c * y]
            })
            .collect();
        let p = ShapeSpec::Polygon(corners);
        for i in 0..50 {
            let x = [-0.5 + 0.02 * i as f64, 0.3 - 0.013 * i as f64];
            assert!((r.sdf(x) - p.sdf(x)).abs() < 1e-12, "{x:?}");
        }
    }

    #[test]
    fn star_tips_lie_on_the_boundary() {
        let s = ShapeSpec::star(0.1, 0.2, 0.2, 0.08, 5, 0.0);
        assert!(s.sdf([0.1, 0.4]).abs() < 1e-15);
        assert!(s.sdf([0.1, 0.2]) < 0.0);
    }

    #[test]
    fn letters_are_simple_closed_regions() {
        let u = ShapeSpec::letter_u(0.0, 0.0, 0.4, 0.4);
        assert!(u.contains([-0.15, 0.1]) && u.contains([0.0, -0.15]));
        // The notch of the U is outside.
        assert!(!u.contains([0.0, 0.1]));
        let t = ShapeSpec::letter_t(0.0, 0.0, 0.4, 0.4);
        assert!(t.contains([0.0, 0.0]) && t.contains([-0.18, 0.18]) && !t.contains([-0.18, -0.1]));
        let m = ShapeSpec::letter_m(0.0, 0.0, 0.4, 0.4);
        assert!(m.contains([-0.18, 0.0]) && !m.contains([0.0, -0.15]));
    }

    #[test]
    fn boolean_combinations() {
        let a = ShapeSpec::circle(0.0, 0.0, 0.2);
        let b = ShapeSpec::circle(0.0, 0.0, 0.1);
        let ring = ShapeSpec::difference(a.clone(), b.clone());
        assert!(!ring.contains([0.0, 0.0]) && ring.contains([0.15, 0.0]));
        let two = ShapeSpec::union(vec![
            ShapeSpec::circle(-0.3, 0.0, 0.1),
            ShapeSpec::circle(0.3, 0.0, 0.1),
        ]);
        assert!((two.sdf([0.0, 0.0]) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn graph_regions_are_periodic_and_conservative() {
        for shape in [
            ShapeSpec::Sinusoid {
                mean: -0.3,
                amplitude: 0.08,
                cycles: 2,
            },
            ShapeSpec::Pulse {
                mean: -0.35,
                amplitude: 0.15,
                x0: 0.5,
                width: 0.1,
            },
            ShapeSpec::RandomWave {
                mean: -0.3,
                amplitude: 0.1,
                modes: 5,
                seed: 7,
            },
        ] {
            for j in 0..20 {
                let y = -0.5 + 0.025 * j as f64;
                assert!((shape.sdf([0.0, y]) - shape.sdf([1.0, y])).abs() < 1e-12);
            }
            assert!(shape.contains([0.3, -0.49]) && !shape.contains([0.3, -0.01]));
            // Magnitude bounded by the vertical distance to the interface.
            let (f, _) = shape.graph(0.37);
            assert!(shape.sdf([0.37, f + 0.05]) <= 0.05 + 1e-15);
        }
    }

    #[test]
    fn text_form_round_trips() {
        let shapes = [
            ShapeSpec::union(vec![
                ShapeSpec::star(-0.18, 0.12, 0.16, 0.07, 5, 0.3),
                ShapeSpec::rect(0.2, -0.18, 0.12, 0.06, 0.5),
            ]),
            ShapeSpec::letter_m(-0.55, 0.0, 0.35, 0.5),
            ShapeSpec::difference(ShapeSpec::circle(0.0, 0.0, 0.2), ShapeSpec::circle(0.1, 0.0, 0.05)),
            ShapeSpec::RandomWave {
                mean: -0.3,
                amplitude: 0.1,
                modes: 5,
                seed: 7,
            },
        ];
        for s in shapes {
            let back: ShapeSpec = s.to_string().parse().unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn malformed_text_is_rejected() {
        for bad in [
            "circle(0, 0)",
            "blob(1)",
            "circle(0, 0, -1)",
            "union()",
            "circle(0,0,0.1) x",
            "rect(a,0,1,1,0)",
        ] {
            assert!(bad.parse::<ShapeSpec>().is_err(), "{bad}");
        }
    }
}
