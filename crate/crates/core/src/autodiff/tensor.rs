//! Dense row-major f64 matrices used as tape node values.

use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Tensor {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Tensor {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0.0)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn scalar(value: f64) -> Self {
        Self::filled(1, 1, value)
    }

    /// Row vector holding `data`.
    pub fn row(data: Vec<f64>) -> Self {
        let cols = data.len();
        Self { rows: 1, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(rows * cols, data.len(), "tensor data length mismatch");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    /// Value of a 1x1 tensor.
    pub fn item(&self) -> f64 {
        debug_assert_eq!(self.len(), 1);
        self.data[0]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Tensor, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.shape(), other.shape());
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// `self += other`.
    pub fn accumulate(&mut self, other: &Tensor) {
        debug_assert_eq!(self.shape(), other.shape());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// `self += scale * other`.
    pub fn accumulate_scaled(&mut self, other: &Tensor, scale: f64) {
        debug_assert_eq!(self.shape(), other.shape());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Columns `start..start + len` as a new tensor.
    pub fn slice_cols(&self, start: usize, len: usize) -> Tensor {
        assert!(start + len <= self.cols, "column slice out of range");
        let mut data = Vec::with_capacity(self.rows * len);
        for r in 0..self.rows {
            let base = r * self.cols + start;
            data.extend_from_slice(&self.data[base..base + len]);
        }
        Tensor::from_vec(self.rows, len, data)
    }

    /// Horizontal concatenation of equal-height blocks.
    pub fn hcat(blocks: &[&Tensor]) -> Tensor {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for b in blocks {
                assert_eq!(b.rows, rows, "hcat row mismatch");
                data.extend_from_slice(&b.data[r * b.cols..(r + 1) * b.cols]);
            }
        }
        Tensor::from_vec(rows, cols, data)
    }

    /// `self @ other`.
    pub fn matmul(&self, other: &Tensor) -> Tensor {
        gemm_new(self, false, other, false)
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor({}x{}, ", self.rows, self.cols)?;
        if self.data.len() <= 8 {
            write!(f, "{:?})", self.data)
        } else {
            write!(f, "{:?}...)", &self.data[..8])
        }
    }
}

fn gemm_dims(a: &Tensor, trans_a: bool, b: &Tensor, trans_b: bool) -> (usize, usize, usize) {
    let (m, k) = if trans_a { (a.cols, a.rows) } else { (a.rows, a.cols) };
    let (k2, n) = if trans_b { (b.cols, b.rows) } else { (b.rows, b.cols) };
    assert_eq!(k, k2, "gemm inner dimension mismatch");
    (m, k, n)
}

/// Calls the kernel on `c` (row-major `m x n`).
///
/// # Safety
/// `c` must be valid for `m * n` writes, and for reads too unless `beta == 0`.
unsafe fn gemm_raw(a: &Tensor, trans_a: bool, b: &Tensor, trans_b: bool, c: *mut f64, beta: f64) {
    let (m, k, n) = gemm_dims(a, trans_a, b, trans_b);
    let (rsa, csa) = if trans_a {
        (1, a.cols as isize)
    } else {
        (a.cols as isize, 1)
    };
    let (rsb, csb) = if trans_b {
        (1, b.cols as isize)
    } else {
        (b.cols as isize, 1)
    };
    matrixmultiply::dgemm(
        m,
        k,
        n,
        1.0,
        a.data.as_ptr(),
        rsa,
        csa,
        b.data.as_ptr(),
        rsb,
        csb,
        beta,
        c,
        n as isize,
        1,
    );
}

/// `out = op(a) @ op(b) + beta * out`, where `op` optionally transposes.
pub(crate) fn gemm(a: &Tensor, trans_a: bool, b: &Tensor, trans_b: bool, out: &mut Tensor, beta: f64) {
    let (m, k, n) = gemm_dims(a, trans_a, b, trans_b);
    assert_eq!(out.shape(), (m, n), "gemm output shape mismatch");
    if m == 0 || n == 0 {
        return;
    }
    if k == 0 {
        for v in out.data.iter_mut() {
            *v *= beta;
        }
        return;
    }
    // SAFETY: `out` holds exactly `m * n` initialized entries.
    unsafe { gemm_raw(a, trans_a, b, trans_b, out.data.as_mut_ptr(), beta) }
}

/// `op(a) @ op(b)` in a fresh tensor.
pub(crate) fn gemm_new(a: &Tensor, trans_a: bool, b: &Tensor, trans_b: bool) -> Tensor {
    let (m, k, n) = gemm_dims(a, trans_a, b, trans_b);
    if m == 0 || n == 0 || k == 0 {
        return Tensor::zeros(m, n);
    }
    let mut data: Vec<f64> = Vec::with_capacity(m * n);
    // SAFETY: with beta = 0 the kernel writes every entry of C without
    // reading it, so the buffer is fully initialized before `set_len`.
    unsafe {
        gemm_raw(a, trans_a, b, trans_b, data.as_mut_ptr(), 0.0);
        data.set_len(m * n);
    }
    Tensor::from_vec(m, n, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gemm_transposes_agree_with_naive() {
        let a = Tensor::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = Tensor::from_vec(3, 2, vec![7.0, 8.0, 9.0, 10.0, 11.0, 12.0]);
        let c = a.matmul(&b);
        assert_eq!(c.data(), &[58.0, 64.0, 139.0, 154.0]);

        // a^T (3x2) @ a (2x3)
        let mut ata = Tensor::zeros(3, 3);
        gemm(&a, true, &a, false, &mut ata, 0.0);
        assert_eq!(ata.get(0, 0), 17.0);
        assert_eq!(ata.get(1, 2), 2.0 * 3.0 + 5.0 * 6.0);

        // b @ b^T accumulated twice
        let mut bbt = Tensor::zeros(3, 3);
        gemm(&b, false, &b, true, &mut bbt, 0.0);
        gemm(&b, false, &b, true, &mut bbt, 1.0);
        assert_eq!(bbt.get(2, 1), 2.0 * (11.0 * 9.0 + 12.0 * 10.0));
    }

    #[test]
    fn slicing_and_hcat_roundtrip() {
        let t = Tensor::from_vec(2, 4, (0..8).map(f64::from).collect());
        let left = t.slice_cols(0, 1);
        let right = t.slice_cols(1, 3);
        assert_eq!(Tensor::hcat(&[&left, &right]), t);
    }
}
