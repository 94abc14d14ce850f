//! Sparse assembly and direct solves.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use crate::error::{Error, Result};

/// Coordinate-format accumulator; duplicate entries are summed.
#[derive(Clone, Debug)]
pub struct Assembler {
    n: usize,
    entries: Vec<Triplet<usize, usize, f64>>,
    tol: f64,
}

impl Assembler {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            entries: Vec::new(),
            tol: 1e-10,
        }
    }

    /// Relative residual accepted after a direct solve (default 1e-10).
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, row: usize, col: usize, val: f64) {
        if val != 0.0 {
            self.entries.push(Triplet::new(row, col, val));
        }
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for t in &self.entries {
            y[t.row] += t.val * x[t.col];
        }
        y
    }

    fn matrix(&self) -> Result<SparseColMat<usize, f64>> {
        SparseColMat::try_new_from_triplets(self.n, self.n, &self.entries)
            .map_err(|e| Error::Solver(format!("sparse assembly failed: {e:?}")))
    }

    /// Solves a symmetric positive definite system by sparse Cholesky.
    pub fn solve_spd(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let a = self.matrix()?;
        let llt = a
            .sp_cholesky(faer::Side::Lower)
            .map_err(|e| Error::Solver(format!("stiffness matrix is singular or indefinite: {e:?}")))?;
        let mut b = Mat::from_fn(self.n, 1, |i, _| rhs[i]);
        llt.solve_in_place(&mut b);
        self.checked((0..self.n).map(|i| b[(i, 0)]).collect(), rhs)
    }

    /// Solves a general square system by sparse LU with partial pivoting.
    pub fn solve_lu(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let a = self.matrix()?;
        let lu = a
            .sp_lu()
            .map_err(|e| Error::Solver(format!("sparse LU failed: {e:?}")))?;
        let mut b = Mat::from_fn(self.n, 1, |i, _| rhs[i]);
        lu.solve_in_place(&mut b);
        self.checked((0..self.n).map(|i| b[(i, 0)]).collect(), rhs)
    }

    /// Rejects solutions that are non-finite, leave a relative residual above
    /// the tolerance, or whose size betrays a numerically singular matrix.
    fn checked(&self, x: Vec<f64>, rhs: &[f64]) -> Result<Vec<f64>> {
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::Solver("linear solve produced non-finite values".into()));
        }
        let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let b = norm(rhs);
        if b == 0.0 {
            return Ok(x);
        }
        let ax = self.apply(&x);
        let r: Vec<f64> = ax.iter().zip(rhs).map(|(a, b)| a - b).collect();
        let rel = norm(&r) / b;
        if rel > self.tol {
            return Err(Error::Solver(format!(
                "relative residual {rel:e} exceeds {:e}",
                self.tol
            )));
        }
        let scale = self.entries.iter().map(|t| t.val.abs()).fold(0.0, f64::max);
        if norm(&x) * scale / b > 1e13 {
            return Err(Error::Solver(
                "matrix is numerically singular (unconstrained modes)".into(),
            ));
        }
        Ok(x)
    }
}
