//! Boundary measurement sets and their CSV form.
//!
//! ```text
//! # observed: u1,u2
//! x1,x2,u1,u2
//! -0.5,-0.495,-0.49823,0.19012
//! ```
//!
//! The first line lists the measured fields. A `NaN` entry marks a component
//! that was not observed at that point.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::networks::FieldRole;

/// Points on the boundary with measured field values.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSet {
    points: Vec<[f64; 2]>,
    roles: Vec<FieldRole>,
    /// Row-major `points.len() x roles.len()`.
    values: Vec<f64>,
}

impl MeasurementSet {
    pub fn new(points: Vec<[f64; 2]>, roles: Vec<FieldRole>, values: Vec<f64>) -> Result<Self> {
        if values.len() != points.len() * roles.len() {
            return Err(Error::Dimension(format!(
                "{} values for {} points and {} fields",
                values.len(),
                points.len(),
                roles.len()
            )));
        }
        Ok(Self { points, roles, values })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn roles(&self) -> &[FieldRole] {
        &self.roles
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, point: usize, role_index: usize) -> f64 {
        self.values[point * self.roles.len() + role_index]
    }

    /// Values of one measured field, `NaN` where unobserved.
    pub fn column(&self, role: FieldRole) -> Option<Vec<f64>> {
        let j = self.roles.iter().position(|&r| r == role)?;
        Some((0..self.len()).map(|i| self.value(i, j)).collect())
    }

    /// Copy with the points (and rows) in the given order.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let m = self.roles.len();
        Self {
            points: order.iter().map(|&i| self.points[i]).collect(),
            roles: self.roles.clone(),
            values: order
                .iter()
                .flat_map(|&i| self.values[i * m..(i + 1) * m].iter().copied())
                .collect(),
        }
    }

    /// Keeps only the listed fields.
    pub fn select(&self, roles: &[FieldRole]) -> Result<Self> {
        let idx: Vec<usize> = roles
            .iter()
            .map(|r| {
                self.roles
                    .iter()
                    .position(|q| q == r)
                    .ok_or_else(|| Error::Config(format!("field `{r}` was not measured")))
            })
            .collect::<Result<_>>()?;
        let values = (0..self.len())
            .flat_map(|i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.value(i, j))
            .collect();
        Self::new(self.points.clone(), roles.to_vec(), values)
    }

    /// Keeps only points for which `keep` is true.
    pub fn filter(&self, keep: impl Fn([f64; 2]) -> bool) -> Self {
        let order: Vec<usize> = (0..self.len()).filter(|&i| keep(self.points[i])).collect();
        self.permuted(&order)
    }

    pub fn to_csv(&self) -> String {
        let names: Vec<&str> = self.roles.iter().map(|r| r.name()).collect();
        let mut s = format!("# observed: {}\nx1,x2", names.join(","));
        for n in &names {
            s.push(',');
            s.push_str(n);
        }
        s.push('\n');
        for (i, p) in self.points.iter().enumerate() {
            write!(s, "{},{}", p[0], p[1]).expect("string write");
            for j in 0..self.roles.len() {
                write!(s, ",{}", self.value(i, j)).expect("string write");
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
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| err(1, "empty measurement file".into()))?;
        let observed = first
            .strip_prefix("# observed:")
            .ok_or_else(|| err(1, "expected `# observed:` mask line".into()))?;
        let roles: Vec<FieldRole> = observed
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| err(1, format!("unknown field `{s}`"))))
            .collect::<Result<_>>()?;
        let (_, header) = lines.next().ok_or_else(|| err(2, "missing column header".into()))?;
        let expected = std::iter::once("x1,x2".to_string())
            .chain(roles.iter().map(|r| r.name().to_string()))
            .collect::<Vec<_>>()
            .join(",");
        if header.trim() != expected {
            return Err(err(2, format!("expected header `{expected}`")));
        }
        let mut points = Vec::new();
        let mut values = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| err(i + 1, format!("not a number: `{s}`")))
                })
                .collect::<Result<_>>()?;
            if fields.len() != 2 + roles.len() {
                return Err(err(
                    i + 1,
                    format!("expected {} columns, found {}", 2 + roles.len(), fields.len()),
                ));
            }
            points.push([fields[0], fields[1]]);
            values.extend_from_slice(&fields[2..]);
        }
        Self::new(points, roles, values)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(&text, &path.display().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip_keeps_nan_and_bits() {
        let m = MeasurementSet::new(
            vec![[-0.5, 0.1], [0.3, 0.5]],
            vec![FieldRole::U1, FieldRole::U2],
            vec![0.1 + 0.2, f64::NAN, -1e-17, 3.0],
        )
        .unwrap();
        let back = MeasurementSet::from_csv(&m.to_csv(), "mem").unwrap();
        assert_eq!(back.points(), m.points());
        for (a, b) in back.values().iter().zip(m.values()) {
            assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
        }
    }

    #[test]
    fn bad_row_reports_line() {
        let text = "# observed: T\nx1,x2,T\n0,0,1\n0,0.5,abc\n";
        match MeasurementSet::from_csv(text, "m.csv") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn select_and_filter() {
        let m = MeasurementSet::new(
            vec![[0.0, 0.0], [1.0, 0.0]],
            vec![FieldRole::Temperature, FieldRole::Q1],
            vec![1.0, 2.0, 3.0, 4.0],
        )
        .unwrap();
        assert_eq!(m.select(&[FieldRole::Q1]).unwrap().values(), &[2.0, 4.0]);
        assert_eq!(m.filter(|p| p[0] > 0.5).values(), &[3.0, 4.0]);
        assert!(m.select(&[FieldRole::U1]).is_err());
    }
}
