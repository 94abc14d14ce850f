//! Latin hypercube collocation points and their mini-batch partition.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::Rect;

/// Default number of collocation points.
pub const DEFAULT_POINTS: usize = 10_000;

/// Default number of mini-batches per epoch.
pub const DEFAULT_BATCHES: usize = 10;

/// `n` points in `domain`, one per stratum along each axis.
pub fn lhs_sample(domain: Rect, n: usize, seed: u64) -> Result<Vec<[f64; 2]>> {
    if n == 0 {
        return Err(Error::Config("Latin hypercube sample needs at least one point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut axis = |lo: f64, hi: f64| {
        let mut strata: Vec<usize> = (0..n).collect();
        strata.shuffle(&mut rng);
        strata
            .into_iter()
            .map(|k| {
                let t = (k as f64 + rng.random::<f64>()) / n as f64;
                (lo + t * (hi - lo)).clamp(lo, hi)
            })
            .collect::<Vec<_>>()
    };
    let xs = axis(domain.x_min, domain.x_max);
    let ys = axis(domain.y_min, domain.y_max);
    Ok(xs.into_iter().zip(ys).map(|(x, y)| [x, y]).collect())
}

/// Collocation points split into consecutive, disjoint mini-batches.
#[derive(Clone, Debug, PartialEq)]
pub struct CollocationSet {
    points: Vec<[f64; 2]>,
    /// Start offsets of each batch, followed by `points.len()`.
    bounds: Vec<usize>,
    seed: u64,
}

impl CollocationSet {
    /// Splits `points` into `batches` groups whose sizes differ by at most one.
    pub fn new(points: Vec<[f64; 2]>, batches: usize, seed: u64) -> Result<Self> {
        if batches == 0 || batches > points.len() {
            return Err(Error::Config(format!(
                "cannot split {} collocation points into {batches} mini-batches",
                points.len()
            )));
        }
        let n = points.len();
        let bounds = (0..=batches).map(|b| b * n / batches).collect();
        Ok(Self { points, bounds, seed })
    }

    /// Latin hypercube sample split into mini-batches.
    pub fn lhs(domain: Rect, n: usize, batches: usize, seed: u64) -> Result<Self> {
        Self::new(lhs_sample(domain, n, seed)?, batches, seed)
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn num_batches(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn batch(&self, i: usize) -> &[[f64; 2]] {
        &self.points[self.bounds[i]..self.bounds[i + 1]]
    }

    pub fn batch_indices(&self, i: usize) -> std::ops::Range<usize> {
        self.bounds[i]..self.bounds[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_per_stratum() {
        let pts = lhs_sample(Rect::new(0.0, 1.0, 0.0, 1.0), 4, 3).unwrap();
        for axis in 0..2 {
            let mut s: Vec<usize> = pts.iter().map(|p| (p[axis] * 4.0).floor() as usize).collect();
            s.sort();
            assert_eq!(s, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn default_partition() {
        let c = CollocationSet::lhs(Rect::new(-0.5, 0.5, -0.5, 0.5), DEFAULT_POINTS, DEFAULT_BATCHES, 0).unwrap();
        assert_eq!(c.num_batches(), 10);
        assert!((0..10).all(|i| c.batch(i).len() == 1000));
    }

    #[test]
    fn deterministic_per_seed() {
        let d = Rect::new(0.0, 1.0, -0.5, 0.0);
        assert_eq!(lhs_sample(d, 50, 9).unwrap(), lhs_sample(d, 50, 9).unwrap());
        assert_ne!(lhs_sample(d, 50, 9).unwrap(), lhs_sample(d, 50, 10).unwrap());
    }

    #[test]
    fn empty_sample_rejected() {
        assert!(lhs_sample(Rect::new(0.0, 1.0, 0.0, 1.0), 0, 0).is_err());
        assert!(CollocationSet::new(vec![[0.0, 0.0]], 2, 0).is_err());
    }
}
